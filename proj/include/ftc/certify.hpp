#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftc/graph.hpp"
#include "ftc/metrics.hpp"

namespace ftc {

/// Per-piece curvature budget: pieces must turn strictly less than pi/8.
inline constexpr double kFtcBudget = kPi / 8 - 1e-9;

// ---- thick criterion -------------------------------------------------------

/// Largest admissible tangent deviation for a given distance and thickness:
/// pi/2 - 2 asin(2 delta / tau). Requires 0 < delta < tau/4.
double theta_of(double delta, double tau);

// ---- corner decomposition --------------------------------------------------

struct DecompositionPoint {
  Point position;
  std::optional<VertexId> vertex;  // set for graph vertices
  ArcId arc = 0;                   // first location on the graph
  std::size_t index = 0;
};

struct Subarc {
  ArcId arc = 0;
  std::size_t begin = 0;  // point indices within the arc polyline
  std::size_t end = 0;
  std::size_t start_point = 0;  // indices into CornerDecomposition::points
  std::size_t end_point = 0;
  double curvature = 0.0;  // interior turning
  double begin_fraction = 0.0;  // arclength fractions within the arc
  double end_fraction = 0.0;

  PolylineArc polyline(const EmbeddedGraph& g) const;
};

struct CornerDecomposition {
  std::vector<DecompositionPoint> points;
  std::vector<Subarc> subarcs;
  double budget = kFtcBudget;
};

struct ForcedPoint {
  ArcId arc = 0;
  std::size_t index = 0;
};

/// Greedy scan: accumulate interior turning along each arc and cut just
/// before the running sum would reach `budget`. Graph vertices, corners of
/// at least pi/8, and `forced` points always become decomposition points.
CornerDecomposition corner_decomposition(const EmbeddedGraph& g, double budget = kFtcBudget,
                                         const std::vector<ForcedPoint>& forced = {});

// ---- radii chain -------------------------------------------------------------

struct RadiiChain {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double r4 = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double r3_measured = 0.0;  // raw minimum distance between clipped pieces

  /// True when every identity and inequality of the chain holds exactly.
  bool consistent() const;
};

/// Piece of a subarc left after removing the open balls at its ends.
struct ClippedPiece {
  std::vector<Point> points;  // at least one point; endpoints lie on ball boundaries
};

ClippedPiece clip_to_balls(const PolylineArc& subarc, const Point& start_center, const Point& end_center, double radius);

RadiiChain ftc_radii(const EmbeddedGraph& g, const CornerDecomposition& d, double epsilon);

// ---- neighborhood ----------------------------------------------------------

/// Foliation of space outside two balls by round spheres and one plane.
///
/// Leaves are indexed by sigma in [0,1]. Leaf sigma has signed curvature
/// (1 - 2 sigma) / r2, so sigma = 0 is the boundary of the start ball,
/// sigma = 1/2 the bisecting plane and sigma = 1 the end ball boundary.
/// Where leaves cross the axis is chosen so that leaves stay nested.
class LeafFamily {
public:
  LeafFamily() = default;
  LeafFamily(const Point& start, const Point& end, double r2);

  double curvature(double sigma) const { return (1.0 - 2.0 * sigma) / r2_; }
  Point axis_point(double sigma) const;
  const Vec3& axis() const { return axis_; }
  double ball_radius() const { return r2_; }

  /// Signed distance from z to leaf sigma (positive toward the end ball).
  double side(double sigma, const Point& z) const;
  /// Unit normal of the leaf through z, pointing toward increasing sigma.
  Vec3 normal(double sigma, const Point& z) const;
  /// Leaf containing z (clamped to [0,1] inside the balls).
  double sigma_of(const Point& z) const;
  /// Closest point of leaf sigma to z.
  Point project(double sigma, const Point& z) const;
  /// Point on leaf sigma at chord distance `d` from q in tangent direction t.
  Point disk_point(double sigma, const Point& q, const Vec3& t, double d) const;

private:
  Point start_, end_;
  Vec3 axis_{1, 0, 0};
  double r2_ = 1.0;
  double half_gap_ = 0.0;
  double stretch_ = 0.0;
};

struct Ball {
  Point center;
  double radius = 0.0;
  std::size_t point = 0;  // decomposition point index
};

struct Tube {
  std::size_t subarc = 0;
  std::size_t start_ball = 0;
  std::size_t end_ball = 0;
  std::vector<Point> core;      // clipped piece (beta)
  std::vector<double> core_sigma;  // leaf index of each core point
  double disk_radius = 0.0;
  LeafFamily leaves;

  /// Point of the core on leaf sigma.
  Point core_point(double sigma) const;
};

struct NeighborhoodModel {
  std::vector<Ball> balls;
  std::vector<Tube> tubes;
  RadiiChain chain;
  double max_strand_normal_angle = 0.0;  // core tangent vs leaf normal
  double max_disk_drift = 0.0;           // normal variation across a disk
};

/// Raised when the neighborhood checks fail (decomposition too coarse).
class NeighborhoodError : public Error {
public:
  using Error::Error;
};

NeighborhoodModel build_neighborhood(const EmbeddedGraph& g, const CornerDecomposition& d, const RadiiChain& chain);

// ---- certificates ----------------------------------------------------------

enum class Criterion { Thick, Ftc };

enum class Refusal {
  None,
  DeltaTooLarge,
  ThetaTooLarge,
  NotContained,   // target leaves the ball-and-tube neighborhood
  NotTransverse,  // target is not transverse to the leaves
};

std::string to_string(Refusal r);
std::string to_string(Criterion c);

struct IsotopyCertificate {
  Criterion criterion = Criterion::Thick;
  bool issued = false;
  Refusal reason = Refusal::None;
  std::string detail;

  double tau = 0.0;          // thick
  double theta_limit = 0.0;  // admissible tangent deviation
  RadiiChain chain;          // ftc
  double budget = 0.0;       // ftc curvature budget actually used
  double motion_bound = 0.0;
  ClosenessReport closeness;
  bool refined_correspondence = false;
  double max_leaf_distance = 0.0;  // ftc: target-to-core distance on leaves
  double max_leaf_angle = 0.0;     // ftc: target tangent vs leaf normal
};

/// Thickness of a link: min over components of the discrete thickness and
/// over component pairs of their distance.
double link_thickness(const EmbeddedGraph& link);

IsotopyCertificate certify_thick(const EmbeddedGraph& k, const EmbeddedGraph& k2, const Correspondence& c,
                                 std::optional<double> tau = std::nullopt);

enum class CorrespondenceMode { Auto, Default, Refined };

/// Everything the frame assembler needs from an FTC certification run.
struct FtcConstruction {
  IsotopyCertificate certificate;
  CornerDecomposition decomposition;
  NeighborhoodModel neighborhood;
  Correspondence correspondence;
};

/// Decomposition plus neighborhood, retried once with a halved curvature
/// budget when the neighborhood checks fail.
std::pair<CornerDecomposition, NeighborhoodModel> build_ftc_model(const EmbeddedGraph& g, double epsilon,
                                                                  const std::vector<ForcedPoint>& forced = {});

FtcConstruction certify_ftc_construction(const EmbeddedGraph& g, const EmbeddedGraph& g2, double epsilon,
                                         CorrespondenceMode mode = CorrespondenceMode::Auto);

inline IsotopyCertificate certify_ftc(const EmbeddedGraph& g, const EmbeddedGraph& g2, double epsilon,
                                      CorrespondenceMode mode = CorrespondenceMode::Auto) {
  return certify_ftc_construction(g, g2, epsilon, mode).certificate;
}

struct LocalFlatness {
  Point center;
  double radius = 0.0;
  int strand_count = 0;
  bool radial = false;  // every strand exits the ball monotonically
};

/// Ball around a point of the graph containing only radial strands.
LocalFlatness locally_flat_witness(const EmbeddedGraph& g, const Point& p0);

}  // namespace ftc
