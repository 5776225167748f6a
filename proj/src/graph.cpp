#include "ftc/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace ftc {

void PolylineArc::validate() const {
  if (points.size() < 2) throw Error("polyline arc needs at least two points");
  for (const auto& p : points)
    if (!is_finite(p)) throw Error("polyline arc has a non-finite coordinate");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (points[i] == points[i + 1]) throw Error("polyline arc has repeated consecutive points at index " + std::to_string(i));
  if (closed) {
    if (points.front() != points.back()) throw Error("closed arc must end at its base point");
    if (points.size() < 4) throw Error("closed arc needs at least three distinct points");
  }
}

void EmbeddedGraph::add_vertex(VertexId id, const Point& p) {
  if (has_vertex(id)) throw Error("duplicate vertex id " + std::to_string(id));
  vertices_.push_back({id, p});
}

void EmbeddedGraph::add_arc(ArcId id, VertexId head, VertexId tail, std::vector<Point> points) {
  for (const auto& a : arcs_)
    if (a.id == id) throw Error("duplicate arc id " + std::to_string(id));
  Arc a;
  a.id = id;
  a.head = head;
  a.tail = tail;
  a.curve.points = std::move(points);
  a.curve.closed = head == tail;
  arcs_.push_back(std::move(a));
}

bool EmbeddedGraph::has_vertex(VertexId id) const {
  return std::any_of(vertices_.begin(), vertices_.end(), [&](const Vertex& v) { return v.id == id; });
}

std::size_t EmbeddedGraph::vertex_index(VertexId id) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].id == id) return i;
  throw Error("unknown vertex id " + std::to_string(id));
}

const Vertex& EmbeddedGraph::vertex(VertexId id) const { return vertices_[vertex_index(id)]; }

std::size_t EmbeddedGraph::arc_index(ArcId id) const {
  for (std::size_t i = 0; i < arcs_.size(); ++i)
    if (arcs_[i].id == id) return i;
  throw Error("unknown arc id " + std::to_string(id));
}

const Arc& EmbeddedGraph::arc(ArcId id) const { return arcs_[arc_index(id)]; }

int EmbeddedGraph::degree(VertexId id) const {
  int d = 0;
  for (const auto& a : arcs_) d += (a.head == id) + (a.tail == id);
  return d;
}

double EmbeddedGraph::diameter() const {
  Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec3 hi = -lo;
  auto grow = [&](const Point& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  };
  for (const auto& v : vertices_) grow(v.position);
  for (const auto& a : arcs_)
    for (const auto& p : a.curve.points) grow(p);
  if (lo.x > hi.x) return 0.0;
  return norm(hi - lo);
}

void EmbeddedGraph::validate(bool check_embedding) const {
  for (const auto& a : arcs_) {
    if (!has_vertex(a.head)) throw Error("arc " + std::to_string(a.id) + " references missing vertex " + std::to_string(a.head));
    if (!has_vertex(a.tail)) throw Error("arc " + std::to_string(a.id) + " references missing vertex " + std::to_string(a.tail));
    if (a.curve.closed != (a.head == a.tail))
      throw Error("arc " + std::to_string(a.id) + ": closed flag must match head == tail");
    a.curve.validate();
    const double tol = 1e-9 * std::max(1.0, diameter());
    if (distance(a.curve.points.front(), vertex(a.head).position) > tol ||
        distance(a.curve.points.back(), vertex(a.tail).position) > tol)
      throw Error("arc " + std::to_string(a.id) + " endpoints do not coincide with their vertices");
  }
  if (check_embedding) {
    const auto sep = min_separation(SegmentSoup::from_graph(*this));
    if (sep.found && sep.distance <= 1e-9 * std::max(1.0, diameter()))
      throw Error("graph is not embedded: non-adjacent segments " + std::to_string(sep.first) + " and " +
                  std::to_string(sep.second) + " touch");
  }
}

EmbeddedGraph make_loop_graph(std::vector<Point> points, ArcId arc_id, VertexId base) {
  if (points.empty()) throw Error("empty loop");
  if (points.front() != points.back()) points.push_back(points.front());
  EmbeddedGraph g;
  g.add_vertex(base, points.front());
  g.add_arc(arc_id, base, base, std::move(points));
  return g;
}

double arc_length(const PolylineArc& arc) {
  double len = 0.0;
  for (std::size_t i = 0; i < arc.segment_count(); ++i) len += norm(arc.segment_vector(i));
  return len;
}

std::vector<double> cumulative_lengths(const PolylineArc& arc) {
  std::vector<double> c(arc.points.size(), 0.0);
  for (std::size_t i = 1; i < arc.points.size(); ++i) c[i] = c[i - 1] + distance(arc.points[i - 1], arc.points[i]);
  return c;
}

Point point_at_length(const PolylineArc& arc, std::span<const double> cumulative, double s) {
  const double total = cumulative.back();
  if (s <= 0.0) return arc.points.front();
  if (s >= total) return arc.points.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - cumulative.begin()) - 1;
  const double seg = cumulative[i + 1] - cumulative[i];
  const double t = seg > 0.0 ? (s - cumulative[i]) / seg : 0.0;
  return lerp(arc.points[i], arc.points[i + 1], t);
}

std::pair<Direction, Direction> one_sided_tangents(const PolylineArc& arc, std::size_t index) {
  const std::size_t n = arc.points.size();
  if (arc.closed && (index == 0 || index == n - 1)) {
    return {Direction(arc.points[n - 1] - arc.points[n - 2]), Direction(arc.points[1] - arc.points[0])};
  }
  if (index == 0 || index + 1 >= n) throw Error("one_sided_tangents: index must be interior");
  return {Direction(arc.points[index] - arc.points[index - 1]), Direction(arc.points[index + 1] - arc.points[index])};
}

std::vector<double> turning_angles(const PolylineArc& arc) {
  const std::size_t n = arc.points.size();
  std::vector<double> t(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    t[i] = angle_between(arc.points[i] - arc.points[i - 1], arc.points[i + 1] - arc.points[i]);
  }
  if (arc.closed && n >= 3) {
    t[0] = angle_between(arc.points[n - 1] - arc.points[n - 2], arc.points[1] - arc.points[0]);
    t[n - 1] = t[0];
  }
  return t;
}

double total_curvature(const PolylineArc& arc) {
  const auto t = turning_angles(arc);
  if (t.size() < 2) return 0.0;
  // for closed arcs the base turning appears at both ends; count it once
  return std::accumulate(t.begin(), t.end() - 1, 0.0);
}

PolylineArc reversed(const PolylineArc& arc) {
  PolylineArc r = arc;
  std::reverse(r.points.begin(), r.points.end());
  return r;
}

std::pair<double, double> point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return {distance(p, a + ab * t), t};
}

SegmentClosest segment_distance(const Point& p0, const Point& p1, const Point& q0, const Point& q1) {
  const Vec3 d1 = p1 - p0;
  const Vec3 d2 = q1 - q0;
  const Vec3 r = p0 - q0;
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);
  double s = 0.0;
  double t = 0.0;
  if (a <= 0.0 && e <= 0.0) {
    return {distance(p0, q0), 0.0, 0.0};
  }
  if (a <= 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      s = denom > 1e-300 * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  // parallel segments: the single candidate above can miss the optimum
  // when s was fixed at 0; refine with the four endpoint projections
  SegmentClosest best{distance(p0 + d1 * s, q0 + d2 * t), s, t};
  auto consider = [&](double ss, double tt) {
    const double d = distance(p0 + d1 * ss, q0 + d2 * tt);
    if (d < best.distance) best = {d, ss, tt};
  };
  if (e > 0.0) {
    consider(0.0, point_segment_distance(p0, q0, q1).second);
    consider(1.0, point_segment_distance(p1, q0, q1).second);
  }
  if (a > 0.0) {
    consider(point_segment_distance(q0, p0, p1).second, 0.0);
    consider(point_segment_distance(q1, p0, p1).second, 1.0);
  }
  return best;
}

double arc_pair_distance(const PolylineArc& a, const PolylineArc& b) {
  struct Box {
    Point lo, hi;
  };
  auto box = [](const Point& p, const Point& q) {
    return Box{{std::min(p.x, q.x), std::min(p.y, q.y), std::min(p.z, q.z)},
               {std::max(p.x, q.x), std::max(p.y, q.y), std::max(p.z, q.z)}};
  };
  std::vector<Box> boxes;
  boxes.reserve(b.segment_count());
  for (std::size_t j = 0; j < b.segment_count(); ++j) boxes.push_back(box(b.points[j], b.points[j + 1]));
  // Box separation is a lower bound for the segment distance.
  auto gap = [](const Box& u, const Box& v) {
    const double dx = std::max({0.0, u.lo.x - v.hi.x, v.lo.x - u.hi.x});
    const double dy = std::max({0.0, u.lo.y - v.hi.y, v.lo.y - u.hi.y});
    const double dz = std::max({0.0, u.lo.z - v.hi.z, v.lo.z - u.hi.z});
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.segment_count(); ++i) {
    const Box bi = box(a.points[i], a.points[i + 1]);
    for (std::size_t j = 0; j < b.segment_count(); ++j) {
      if (gap(bi, boxes[j]) >= best) continue;
      best = std::min(best, segment_distance(a.points[i], a.points[i + 1], b.points[j], b.points[j + 1]).distance);
    }
  }
  return best;
}

double point_arc_distance(const Point& p, const PolylineArc& arc) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < arc.segment_count(); ++i)
    best = std::min(best, point_segment_distance(p, arc.points[i], arc.points[i + 1]).first);
  return best;
}

std::vector<Corner> corner_set(const EmbeddedGraph& g, double threshold, double tol) {
  if (!(threshold > 0.0) || threshold > kPi + tol) throw Error("corner_set: threshold must lie in (0, pi]");
  std::vector<Corner> out;
  for (const auto& a : g.arcs()) {
    const auto t = turning_angles(a.curve);
    const std::size_t first = a.curve.closed ? 0 : 1;
    for (std::size_t i = first; i + 1 < t.size(); ++i)
      if (t[i] >= threshold - tol) out.push_back({a.id, i, t[i]});
  }
  return out;
}

SegmentSoup SegmentSoup::from_graph(const EmbeddedGraph& g) {
  std::vector<std::vector<Point>> arcs;
  std::vector<std::pair<VertexId, VertexId>> ends;
  for (const auto& a : g.arcs()) {
    arcs.push_back(a.curve.points);
    ends.emplace_back(a.head, a.tail);
  }
  return from_polylines(arcs, ends);
}

SegmentSoup SegmentSoup::from_polylines(const std::vector<std::vector<Point>>& arcs,
                                        const std::vector<std::pair<VertexId, VertexId>>& arc_ends) {
  SegmentSoup soup;
  constexpr long kStride = 1L << 32;
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    const auto& pts = arcs[k];
    const std::size_t n = pts.size();
    auto key = [&](std::size_t i) -> long {
      if (i == 0) return -1 - static_cast<long>(arc_ends[k].first);
      if (i + 1 == n) return -1 - static_cast<long>(arc_ends[k].second);
      return static_cast<long>(k + 1) * kStride + static_cast<long>(i);
    };
    for (std::size_t i = 0; i + 1 < n; ++i) soup.segments.push_back({pts[i], pts[i + 1], key(i), key(i + 1)});
  }
  return soup;
}

Separation min_separation(const SegmentSoup& soup) {
  const auto& segs = soup.segments;
  const std::size_t n = segs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto lo = [&](std::size_t i, int axis) {
    const auto& s = segs[i];
    return axis == 0 ? std::min(s.a.x, s.b.x) : axis == 1 ? std::min(s.a.y, s.b.y) : std::min(s.a.z, s.b.z);
  };
  auto hi = [&](std::size_t i, int axis) {
    const auto& s = segs[i];
    return axis == 0 ? std::max(s.a.x, s.b.x) : axis == 1 ? std::max(s.a.y, s.b.y) : std::max(s.a.z, s.b.z);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double li = lo(i, 0), lj = lo(j, 0);
    return li != lj ? li < lj : i < j;
  });
  Separation best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::size_t i = order[oi];
    for (std::size_t oj = oi + 1; oj < n; ++oj) {
      const std::size_t j = order[oj];
      if (lo(j, 0) > hi(i, 0) + best.distance) break;
      const auto& a = segs[i];
      const auto& b = segs[j];
      if (a.key_a == b.key_a || a.key_a == b.key_b || a.key_b == b.key_a || a.key_b == b.key_b) continue;
      if (lo(j, 1) - hi(i, 1) > best.distance || lo(i, 1) - hi(j, 1) > best.distance) continue;
      if (lo(j, 2) - hi(i, 2) > best.distance || lo(i, 2) - hi(j, 2) > best.distance) continue;
      const double d = segment_distance(a.a, a.b, b.a, b.b).distance;
      if (d < best.distance || (d == best.distance && std::min(i, j) < best.first)) {
        best.distance = d;
        best.first = std::min(i, j);
        best.second = std::max(i, j);
        best.found = true;
      }
    }
  }
  return best;
}

}  // namespace ftc
