#pragma once

#include <cstddef>
#include <vector>

#include "ftc/certify.hpp"

namespace ftc {

/// Worker count from FTC_ISOTOPY_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

// ---- stage I -----------------------------------------------------------------

/// Time-t map of the ball that slides `moving` to the center along straight
/// lines: with x = moving + lambda (q - moving) for q on the sphere, x goes to
/// c_t + lambda (q - c_t) where c_t = moving + t (center - moving). The
/// boundary sphere and everything outside stay fixed.
class RadialBallMap {
public:
  RadialBallMap(const Point& center, double radius, const Point& moving);
  Point operator()(const Point& x, double t) const;

private:
  Point center_;
  double radius_;
  Point moving_;
};

std::vector<Point> radial_ball_isotopy(const Ball& ball, const Point& moving, const std::vector<Point>& points, double t);

// ---- combing -------------------------------------------------------------

/// Combing of radially monotone strands in a ball toward straight radii.
///
/// Scale mu in [0,1] names the sphere of radius mu * radius. At time t the
/// sphere of scale lambda carries the pattern that was initially on scale
/// lambda + (1 - lambda) t, so at t = 1 every strand is a straight radius.
class Combing {
public:
  /// Each strand starts at the center and ends on the boundary sphere.
  Combing(const Point& center, double radius, std::vector<std::vector<Point>> strands);

  std::size_t strand_count() const { return strands_.size(); }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }

  /// Unit direction from the center to strand i on the sphere of scale mu.
  Vec3 direction(std::size_t i, double mu) const;
  /// Position at time t of the point x lying on strand i.
  Point strand_point(std::size_t i, const Point& x, double t) const;
  /// Position at time t of the strand-i point at scale lambda.
  Point at_scale(std::size_t i, double lambda, double t) const;
  /// Ambient extension: a bump-supported flow on each sphere that carries
  /// every strand along with the pattern.
  Point ambient(const Point& x, double t) const;

private:
  bool straight(std::size_t i) const { return straight_[i]; }
  Vec3 flow_velocity(const Vec3& v, double mu, double lo, double hi) const;

  Point center_;
  double radius_;
  std::vector<std::vector<Point>> strands_;
  std::vector<std::vector<double>> scales_;  // scale of each strand point
  std::vector<bool> straight_;
  double bump_support_ = kPi / 8.0;
};

std::vector<std::vector<Point>> combing_isotopy(const Point& center, double radius,
                                                const std::vector<std::vector<Point>>& strands, double t);

// ---- stage J: leaf disks ---------------------------------------------------

/// Cone map of one leaf disk that slides `source` to the disk center while
/// fixing the disk boundary, evaluated at w and time s. Works in exact
/// tangent-plane coordinates of the leaf at the center.
Point leaf_isotopy(const LeafFamily& leaves, double sigma, const Point& center, double disk_radius,
                   const Point& source, double s, const Point& w);

// ---- frames ------------------------------------------------------------------

struct Frame {
  double time = 0.0;
  std::vector<std::vector<Point>> arcs;  // one polyline per arc, source orientation
  bool embedded = true;
  double min_separation = 0.0;
  double max_displacement = 0.0;  // from frame 0
};

struct IsotopyFrames {
  std::vector<ArcId> arc_ids;
  std::vector<std::pair<VertexId, VertexId>> arc_ends;
  std::vector<Frame> frames;
  double motion_bound = 0.0;
  double max_displacement = 0.0;
  bool all_embedded = true;

  /// Frame as a graph (vertices taken from the arc end points).
  EmbeddedGraph graph(std::size_t frame) const;
};

/// Tracks points of g2 through the composite isotopy that carries g2 onto g.
///
/// Global time T: [0, 1/2] slides each p'_j to p_j inside its ball; [1/2, 1]
/// combs target strands to radii, slides tube points along leaves to the
/// core while radii follow their boundary points, then uncombs onto g.
class FtcIsotopy {
public:
  FtcIsotopy(const EmbeddedGraph& g, const EmbeddedGraph& g2, const FtcConstruction& construction);

  /// Tracked points of every arc at global time T.
  std::vector<std::vector<Point>> positions(double T) const;
  std::size_t tracked_count() const;

private:
  struct Tracked;
  struct BallStrands;
  Point evaluate(const Tracked& p, double T) const;

  const NeighborhoodModel* model_;
  std::vector<RadialBallMap> stage_one_;
  std::vector<BallStrands> balls_;
  std::vector<std::vector<Tracked>> tracked_;
};

/// Samples the FTC isotopy at m uniform times plus the hand-off time. Frame 0
/// is g, the last frame is g2.
IsotopyFrames assemble_frames(const EmbeddedGraph& g, const EmbeddedGraph& g2, const FtcConstruction& construction,
                              int m = 50);

/// Straight-line homotopy along the correspondence used by a thick
/// certificate; each point moves at most delta*.
IsotopyFrames assemble_thick_frames(const EmbeddedGraph& k, const EmbeddedGraph& k2, const IsotopyCertificate& cert,
                                    const Correspondence& c, int m = 50);

// ---- smallness -------------------------------------------------------------

struct DisplacementField {
  std::vector<std::pair<Point, Vec3>> samples;  // (p, f(p))
  double declared_bound = 0.0;
  double lipschitz = 0.0;
};

struct Smallness {
  double delta = 0.0;
  double theta_bound = 0.0;
  double lipschitz = 0.0;
};

/// delta = max |f(p)|, lambda = max |f(p) - f(q)| / |p - q| over sample
/// pairs; the isotopy p + t f(p) is then (delta, arctan lambda)-small.
Smallness smallness_verifier(const DisplacementField& field);

}  // namespace ftc
