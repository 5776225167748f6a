#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ftc/vec3.hpp"

namespace ftc {

using VertexId = int;
using ArcId = int;

/// Default absolute tolerance for angle comparisons (radians).
inline constexpr double kAngleTolerance = 1e-9;

/// Ordered point list realizing one edge of an embedded graph.
///
/// A closed arc starts and ends at the same point (its base vertex); the
/// turning angle at the base point then counts as interior curvature.
struct PolylineArc {
  std::vector<Point> points;
  bool closed = false;

  std::size_t segment_count() const { return points.empty() ? 0 : points.size() - 1; }
  Vec3 segment_vector(std::size_t i) const { return points[i + 1] - points[i]; }

  /// Throws when the arc has fewer than two points, repeated consecutive
  /// points, non-finite coordinates, or an unclosed closed loop.
  void validate() const;
};

struct Vertex {
  VertexId id = 0;
  Point position;
};

struct Arc {
  ArcId id = 0;
  VertexId head = 0;  // vertex at points.front()
  VertexId tail = 0;  // vertex at points.back()
  PolylineArc curve;
};

class EmbeddedGraph {
public:
  EmbeddedGraph() = default;

  void add_vertex(VertexId id, const Point& p);
  /// Appends an arc; the closed flag is derived from head == tail.
  void add_arc(ArcId id, VertexId head, VertexId tail, std::vector<Point> points);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::vector<Arc>& arcs() { return arcs_; }

  const Vertex& vertex(VertexId id) const;
  bool has_vertex(VertexId id) const;
  std::size_t vertex_index(VertexId id) const;
  const Arc& arc(ArcId id) const;
  std::size_t arc_index(ArcId id) const;

  /// Number of arc ends at the vertex (a closed loop contributes two).
  int degree(VertexId id) const;

  /// Checks arc validity, incidences, and that arc endpoints sit on their
  /// vertices. With `check_embedding`, also rejects graphs whose arcs touch
  /// away from shared vertices.
  void validate(bool check_embedding = true) const;

  /// Largest coordinate extent; used to scale tolerances.
  double diameter() const;

  /// Apply `f` to every vertex and arc point.
  template <class F>
  EmbeddedGraph transformed(F&& f) const {
    EmbeddedGraph g = *this;
    for (auto& v : g.vertices_) v.position = f(v.position);
    for (auto& a : g.arcs_)
      for (auto& p : a.curve.points) p = f(p);
    return g;
  }

private:
  std::vector<Vertex> vertices_;
  std::vector<Arc> arcs_;
};

/// Single-arc graph for a closed loop through `points` (last point is
/// appended automatically when it differs from the first).
EmbeddedGraph make_loop_graph(std::vector<Point> points, ArcId arc_id = 0, VertexId base = 0);

// ---- polyline measurements -------------------------------------------------

double arc_length(const PolylineArc& arc);

/// Cumulative arclength at each point (front = 0, back = total length).
std::vector<double> cumulative_lengths(const PolylineArc& arc);

/// Point at arclength `s` (clamped to [0, length]).
Point point_at_length(const PolylineArc& arc, std::span<const double> cumulative, double s);

/// Incoming and outgoing unit directions at an interior point. For closed
/// arcs index 0 (the base point) is also interior.
std::pair<Direction, Direction> one_sided_tangents(const PolylineArc& arc, std::size_t index);

inline double turning_angle(const Direction& incoming, const Direction& outgoing) {
  return angle_between(incoming, outgoing);
}

/// Turning angle at every point of the arc: open arcs report 0 at both ends,
/// closed arcs report the base turning at index 0 and at the duplicated end.
std::vector<double> turning_angles(const PolylineArc& arc);

/// Sum of interior turning angles (base turning included for closed arcs).
double total_curvature(const PolylineArc& arc);

PolylineArc reversed(const PolylineArc& arc);

// ---- distances ---------------------------------------------------------------

struct SegmentClosest {
  double distance = 0.0;
  double s = 0.0;  // parameter on the first segment
  double t = 0.0;  // parameter on the second segment
};

/// Exact minimum distance between segments [p0,p1] and [q0,q1].
SegmentClosest segment_distance(const Point& p0, const Point& p1, const Point& q0, const Point& q1);

/// Distance from `p` to segment [a,b] and the closest parameter.
std::pair<double, double> point_segment_distance(const Point& p, const Point& a, const Point& b);

/// Minimum distance over all segment pairs of two arcs.
double arc_pair_distance(const PolylineArc& a, const PolylineArc& b);

/// Distance from a point to a polyline.
double point_arc_distance(const Point& p, const PolylineArc& arc);

struct Corner {
  ArcId arc = 0;
  std::size_t index = 0;
  double angle = 0.0;
};

/// Points of the graph whose turning angle is at least `threshold` (up to
/// `tol`). Graph vertices at open arc ends are never reported.
std::vector<Corner> corner_set(const EmbeddedGraph& g, double threshold, double tol = kAngleTolerance);

// ---- embeddedness ------------------------------------------------------------

/// A bag of segments with endpoint identity keys; two segments sharing a key
/// are adjacent and are skipped when measuring separation.
struct SegmentSoup {
  struct Segment {
    Point a, b;
    long key_a = 0;
    long key_b = 0;
  };
  std::vector<Segment> segments;

  static SegmentSoup from_graph(const EmbeddedGraph& g);
  /// One polyline per arc with shared vertex keys taken from `arc_ends`
  /// (head, tail) vertex ids; used for moving frames.
  static SegmentSoup from_polylines(const std::vector<std::vector<Point>>& arcs,
                                    const std::vector<std::pair<VertexId, VertexId>>& arc_ends);
};

struct Separation {
  double distance = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;
  bool found = false;  // false when no non-adjacent pair exists
};

/// Minimum distance between non-adjacent segments.
Separation min_separation(const SegmentSoup& soup);

}  // namespace ftc
