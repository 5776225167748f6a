#pragma once

#include <cstdint>
#include <vector>

#include "ftc/graph.hpp"

namespace ftc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Location of a crossing on one strand: segment index and parameter in it.
struct StrandPosition {
  std::size_t strand = 0;
  std::size_t segment = 0;
  double t = 0.0;
};

struct Crossing {
  StrandPosition over;
  StrandPosition under;
  int sign = 0;  // +1 right-handed, -1 left-handed
  Point2 location;
};

/// Planar projection of a set of polylines along `direction`. The plane
/// basis (e1, e2, direction) is right-handed; larger height along
/// `direction` is over.
struct Diagram {
  Direction direction;
  Vec3 e1, e2;
  std::vector<std::vector<Point2>> strands;
  std::vector<bool> closed;
  std::vector<Crossing> crossings;
  int attempts = 0;  // projection directions tried
};

/// Generic projection: tries the z-axis first when `seed` is 0, then
/// seeded random directions, until no tangencies, triple points, crossings
/// at vertices, or crossings with angle below 1e-6 remain. Throws after 64
/// attempts.
Diagram project_generic(const std::vector<PolylineArc>& strands, std::uint64_t seed = 0);
Diagram project_generic(const EmbeddedGraph& g, std::uint64_t seed = 0);

/// Half the signed count of crossings between the two closed curves.
int linking_number(const PolylineArc& k1, const PolylineArc& k2, std::uint64_t seed = 0);

/// Numeric Gauss double integral over all segment pairs, for cross-checks.
double gauss_linking_integral(const PolylineArc& k1, const PolylineArc& k2, int samples_per_segment = 8);

/// Absolute Goeritz determinant of a generic diagram of a closed curve.
std::int64_t knot_determinant(const PolylineArc& k, std::uint64_t seed = 0);

/// Determinant of the Goeritz matrix of an existing one-strand diagram.
std::int64_t goeritz_determinant(const Diagram& d);

/// Exact determinant of an integer matrix (fraction-free elimination).
std::int64_t integer_determinant(const std::vector<std::vector<std::int64_t>>& m);

struct ThetaGraph {
  Point p, q;
  PolylineArc alpha;  // along k from p to q
  PolylineArc beta;   // near-chord from p to q
  PolylineArc gamma;  // along k from q back to p
  bool embedded = false;
  double max_move = 0.0;  // largest displacement of a chord vertex
  int attempts = 0;

  /// Vertices 0 (p) and 1 (q); arcs 0 = alpha, 1 = beta, 2 = gamma.
  EmbeddedGraph graph() const;
  /// Closed curve alpha followed by beta reversed.
  PolylineArc alpha_beta() const;
  /// Closed curve alpha followed by gamma.
  PolylineArc alpha_gamma() const;
};

/// Splits the closed curve at p and q (which must lie on it) and joins them
/// by a subdivided chord, perturbing chord vertices by less than `eps`
/// until the three arcs are disjoint away from p and q.
ThetaGraph make_theta(const PolylineArc& k, const Point& p, const Point& q, double eps, std::uint64_t seed = 0);

struct ZeroFramedParallel {
  PolylineArc curve;
  int twists = 0;            // full twists inserted along alpha
  int initial_linking = 0;   // linking with alpha-gamma before the correction
  int linking = 0;           // after the correction (always 0)
  double clearance = 0.0;    // distance from the curve to the theta graph
};

/// Push-off of alpha-beta at distance `offset` along a rotation-minimizing
/// frame, with whole twists inserted along alpha until its linking number
/// with alpha-gamma is zero.
ZeroFramedParallel zero_framed_parallel(const ThetaGraph& theta, double offset);

}  // namespace ftc
