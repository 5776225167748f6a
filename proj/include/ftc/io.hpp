#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ftc/certify.hpp"
#include "ftc/invariants.hpp"
#include "ftc/isotopy.hpp"
#include "ftc/refine.hpp"

namespace ftc {

// ---- graph files ---------------------------------------------------------------
//
//   ftcgraph 1
//   units <free text>            (optional)
//   v <id> <x> <y> <z>
//   a <id> <head> <tail> [closed]
//     p <x> <y> <z>              (one line per arc point, indented)
//
// Blank lines and lines starting with '#' are ignored. Numbers are written
// in the shortest form that reads back to the same double, so a round trip
// is exact.

struct GraphFile {
  std::string units;
  EmbeddedGraph graph;
};

/// Throws Error with the offending line number. With `check_embedding`,
/// arcs touching away from shared vertices (closer than tolerance times
/// max(1, diameter)) are rejected.
GraphFile parse_graph_file(std::string_view text, bool check_embedding = true, double tolerance = 1e-9);
EmbeddedGraph parse_graph(std::string_view text, bool check_embedding = true, double tolerance = 1e-9);
std::string serialize_graph(const EmbeddedGraph& g, const std::string& units = "");

GraphFile read_graph_file(const std::string& path, bool check_embedding = true, double tolerance = 1e-9);
void write_text_file(const std::string& path, const std::string& text);

// ---- reports ---------------------------------------------------------------------

struct RunConfig {
  double epsilon = 0.1;
  double tolerance = 1e-9;
  int frames = 50;
  std::uint64_t seed = 0;
  CorrespondenceMode mode = CorrespondenceMode::Auto;
};

/// Shortest decimal form that reads back to the same double.
std::string format_number(double x);

/// `key value` lines, one per field; chain fields are prefixed `chain.`.
std::string format_certificate(const IsotopyCertificate& c);
std::string format_closeness(const ClosenessReport& r);
std::string format_chain(const RadiiChain& c);
std::string format_rounding(const RoundingReport& r);

/// Projection record: direction, then strands as `s <index> <closed>`
/// followed by `q <x> <y>` lines, then `c <over strand> <over segment>
/// <over t> <under strand> <under segment> <under t> <sign> <x> <y>`.
std::string format_diagram(const Diagram& d);

// ---- meshes and frames ---------------------------------------------------------

/// OBJ text: a UV sphere per ball and a lofted ring of leaf disks per tube.
std::string neighborhood_obj(const NeighborhoodModel& m, int segments = 16);
/// OBJ polylines (`l` records), one per arc.
std::string polylines_obj(const std::vector<std::vector<Point>>& arcs);

/// Writes `<prefix>_frame_NNN.txt` and `<prefix>_frame_NNN.obj` per frame
/// and `<prefix>_frames.index` listing time, embeddedness and file names.
/// Returns the index path.
std::string write_frames(const IsotopyFrames& frames, const std::string& prefix);
std::string format_frame(const IsotopyFrames& frames, std::size_t i);

// ---- command line ----------------------------------------------------------------

/// Runs one subcommand; `args` excludes the program name. Exit codes:
/// 0 success or certificate, 2 refusal, 1 error or usage.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ftc
