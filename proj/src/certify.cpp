#include "ftc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace ftc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
  Point lo{kInf, kInf, kInf};
  Point hi{-kInf, -kInf, -kInf};
  void add(const Point& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  double distance(const Box& o) const {
    const double dx = std::max({0.0, lo.x - o.hi.x, o.lo.x - hi.x});
    const double dy = std::max({0.0, lo.y - o.hi.y, o.lo.y - hi.y});
    const double dz = std::max({0.0, lo.z - o.hi.z, o.lo.z - hi.z});
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }
};

Box box_of(const std::vector<Point>& pts) {
  Box b;
  for (const auto& p : pts) b.add(p);
  return b;
}

// Distance between point lists read as polylines; a single point is a
// degenerate polyline.
double polyline_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  double best = kInf;
  const std::size_t na = std::max<std::size_t>(a.size(), 2) - 1;
  const std::size_t nb = std::max<std::size_t>(b.size(), 2) - 1;
  for (std::size_t i = 0; i < na; ++i) {
    const Point& a0 = a[i];
    const Point& a1 = a.size() > 1 ? a[i + 1] : a[i];
    for (std::size_t j = 0; j < nb; ++j) {
      const Point& b0 = b[j];
      const Point& b1 = b.size() > 1 ? b[j + 1] : b[j];
      best = std::min(best, segment_distance(a0, a1, b0, b1).distance);
    }
  }
  return best;
}

// Larger root t in [0,1] of |a + t (b - a) - c| = r, assuming |a - c| <= r <= |b - c|.
double exit_parameter(const Point& a, const Point& b, const Point& c, double r) {
  const Vec3 d = b - a;
  const Vec3 f = a - c;
  const double qa = dot(d, d);
  const double qb = 2.0 * dot(f, d);
  const double qc = dot(f, f) - r * r;
  const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
  const double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
  return std::clamp(t, 0.0, 1.0);
}

}  // namespace

double theta_of(double delta, double tau) {
  if (!(tau > 0.0) || !(delta > 0.0) || !(delta < tau / 4.0))
    throw Error("theta_of requires 0 < delta < tau/4");
  return kPi / 2.0 - 2.0 * std::asin(2.0 * delta / tau);
}

// ---- corner decomposition --------------------------------------------------

PolylineArc Subarc::polyline(const EmbeddedGraph& g) const {
  const auto& pts = g.arc(arc).curve.points;
  PolylineArc p;
  p.points.assign(pts.begin() + static_cast<std::ptrdiff_t>(begin), pts.begin() + static_cast<std::ptrdiff_t>(end) + 1);
  return p;
}

CornerDecomposition corner_decomposition(const EmbeddedGraph& g, double budget, const std::vector<ForcedPoint>& forced) {
  if (!(budget > 0.0)) throw Error("curvature budget must be positive");
  CornerDecomposition d;
  d.budget = budget;

  std::map<VertexId, std::size_t> vertex_point;
  for (const auto& v : g.vertices()) {
    vertex_point[v.id] = d.points.size();
    d.points.push_back({v.position, v.id, 0, 0});
  }
  std::vector<bool> located(d.points.size(), false);
  for (const auto& a : g.arcs()) {
    const std::pair<VertexId, std::size_t> ends[2] = {{a.head, 0}, {a.tail, a.curve.points.size() - 1}};
    for (const auto& [v, index] : ends) {
      const std::size_t k = vertex_point.at(v);
      if (located[k]) continue;
      located[k] = true;
      d.points[k].arc = a.id;
      d.points[k].index = index;
    }
  }

  const double corner = kPi / 8.0 - kAngleTolerance;
  for (const auto& a : g.arcs()) {
    const auto& pts = a.curve.points;
    const std::size_t n = pts.size();
    const auto turn = turning_angles(a.curve);
    const auto cum = cumulative_lengths(a.curve);
    const double len = cum.back();

    std::set<std::size_t> force;
    for (const auto& f : forced)
      if (f.arc == a.id) {
        if (f.index >= n) throw Error("forced decomposition point out of range");
        if (f.index > 0 && f.index + 1 < n) force.insert(f.index);
      }

    std::vector<std::size_t> cuts{0};
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double t = turn[i];
      if (force.count(i) || t >= corner || acc + t >= budget) {
        cuts.push_back(i);
        acc = 0.0;
      } else {
        acc += t;
      }
    }
    cuts.push_back(n - 1);

    std::vector<std::size_t> cut_point(cuts.size());
    cut_point.front() = vertex_point.at(a.head);
    cut_point.back() = vertex_point.at(a.tail);
    for (std::size_t c = 1; c + 1 < cuts.size(); ++c) {
      cut_point[c] = d.points.size();
      d.points.push_back({pts[cuts[c]], std::nullopt, a.id, cuts[c]});
    }
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      Subarc s;
      s.arc = a.id;
      s.begin = cuts[c];
      s.end = cuts[c + 1];
      s.start_point = cut_point[c];
      s.end_point = cut_point[c + 1];
      for (std::size_t i = s.begin + 1; i < s.end; ++i) s.curvature += turn[i];
      s.begin_fraction = cum[s.begin] / len;
      s.end_fraction = cum[s.end] / len;
      if (s.start_point == s.end_point) throw Error("subarc returns to its own decomposition point");
      d.subarcs.push_back(s);
    }
  }
  return d;
}

// ---- radii chain -------------------------------------------------------------

bool RadiiChain::consistent() const {
  return r2 == std::min(r1 / 2.0, epsilon / 2.0) && r3 < 2.0 * r2 && r4 == r3 / 6.0 && delta == r4 / 3.0 &&
         delta < r2 / 9.0 && r4 > 0.0;
}

ClippedPiece clip_to_balls(const PolylineArc& subarc, const Point& start_center, const Point& end_center, double radius) {
  const auto& P = subarc.points;
  const std::size_t n = P.size();
  if (n < 2) throw NeighborhoodError("subarc has fewer than two points");

  std::size_t si = n;
  double st = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (distance(P[i + 1], start_center) >= radius) {
      si = i;
      st = exit_parameter(P[i], P[i + 1], start_center, radius);
      break;
    }
  std::size_t ei = n;
  double et = 0.0;  // parameter measured from P[ei + 1] backwards
  for (std::size_t k = n - 1; k >= 1; --k)
    if (distance(P[k - 1], end_center) >= radius) {
      ei = k - 1;
      et = exit_parameter(P[k], P[k - 1], end_center, radius);
      break;
    }
  if (si == n || ei == n) throw NeighborhoodError("subarc never leaves its end balls");

  const Point exit = lerp(P[si], P[si + 1], st);
  const Point entry = lerp(P[ei + 1], P[ei], et);
  const double exit_pos = static_cast<double>(si) + st;
  const double entry_pos = static_cast<double>(ei) + 1.0 - et;

  ClippedPiece piece;
  if (exit_pos >= entry_pos) {
    piece.points.push_back(lerp(exit, entry, 0.5));
    return piece;
  }
  piece.points.push_back(exit);
  for (std::size_t i = si + 1; i <= ei; ++i) {
    const double pos = static_cast<double>(i);
    if (pos > exit_pos && pos < entry_pos && distance(P[i], piece.points.back()) > 0.0) piece.points.push_back(P[i]);
  }
  if (distance(entry, piece.points.back()) > 0.0) piece.points.push_back(entry);
  return piece;
}

RadiiChain ftc_radii(const EmbeddedGraph& g, const CornerDecomposition& d, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  const std::size_t S = d.subarcs.size();
  std::vector<PolylineArc> polys;
  std::vector<Box> boxes;
  polys.reserve(S);
  for (const auto& s : d.subarcs) {
    polys.push_back(s.polyline(g));
    boxes.push_back(box_of(polys.back().points));
  }

  double r1 = kInf;
  for (std::size_t i = 0; i < d.points.size(); ++i)
    for (std::size_t j = i + 1; j < d.points.size(); ++j)
      r1 = std::min(r1, distance(d.points[i].position, d.points[j].position));
  for (std::size_t k = 0; k < S; ++k)
    for (std::size_t l = k + 1; l < S; ++l) {
      const auto& a = d.subarcs[k];
      const auto& b = d.subarcs[l];
      if (a.start_point == b.start_point || a.start_point == b.end_point || a.end_point == b.start_point ||
          a.end_point == b.end_point)
        continue;
      if (boxes[k].distance(boxes[l]) >= r1) continue;
      r1 = std::min(r1, arc_pair_distance(polys[k], polys[l]));
    }
  if (!(r1 > 0.0) || !std::isfinite(r1)) throw Error("degenerate decomposition: r1 = " + std::to_string(r1));

  RadiiChain c;
  c.epsilon = epsilon;
  c.r1 = r1;
  c.r2 = std::min(r1 / 2.0, epsilon / 2.0);

  std::vector<std::vector<Point>> pieces;
  for (std::size_t k = 0; k < S; ++k)
    pieces.push_back(clip_to_balls(polys[k], d.points[d.subarcs[k].start_point].position,
                                   d.points[d.subarcs[k].end_point].position, c.r2)
                         .points);
  double r3 = kInf;
  for (std::size_t k = 0; k < S; ++k)
    for (std::size_t l = k + 1; l < S; ++l) r3 = std::min(r3, polyline_distance(pieces[k], pieces[l]));
  c.r3_measured = r3;
  // Pieces ending on a common sphere are at most 2 r2 apart; isolated pieces
  // are capped there so that delta < r2/9 stays strict.
  c.r3 = std::min(r3, 2.0 * c.r2 * (1.0 - 1e-9));
  if (!(c.r3 > 0.0)) throw Error("clipped pieces touch: r3 = 0");
  c.r4 = c.r3 / 6.0;
  c.delta = c.r4 / 3.0;
  return c;
}

// ---- leaf family -------------------------------------------------------------

LeafFamily::LeafFamily(const Point& start, const Point& end, double r2) : start_(start), end_(end), r2_(r2) {
  const double D = distance(start, end);
  if (!(D > 0.0)) throw NeighborhoodError("coincident ball centers");
  axis_ = (end - start) / D;
  half_gap_ = (D - 2.0 * r2) / 2.0;
  if (half_gap_ < 0.0) {
    if (half_gap_ < -1e-12 * D) throw NeighborhoodError("end balls overlap");
    half_gap_ = 0.0;
  }
  // Leaves stay nested while the crossing point moves at most twice as fast
  // as the leaf radius grows; with u = 1 - 2 sigma and y = h (1 - u) / (1 + a u)
  // that holds for a >= h / (2 r2) - 1.
  stretch_ = std::max(0.0, half_gap_ / (2.0 * r2) - 1.0);
}

Point LeafFamily::axis_point(double sigma) const {
  const double u = std::abs(1.0 - 2.0 * sigma);
  const double y = half_gap_ * (1.0 - u) / (1.0 + stretch_ * u);
  return sigma <= 0.5 ? start_ + (r2_ + y) * axis_ : end_ - (r2_ + y) * axis_;
}

double LeafFamily::side(double sigma, const Point& z) const {
  const double k = curvature(sigma);
  const Vec3 w = z - axis_point(sigma);
  return (k * dot(w, w) + 2.0 * dot(w, axis_)) / (norm(k * w + axis_) + 1.0);
}

Vec3 LeafFamily::normal(double sigma, const Point& z) const {
  const Vec3 v = curvature(sigma) * (z - axis_point(sigma)) + axis_;
  const double n = norm(v);
  if (!(n > 0.0)) return axis_;
  return v / n;
}

double LeafFamily::sigma_of(const Point& z) const {
  if (side(0.0, z) <= 0.0) return 0.0;
  if (side(1.0, z) >= 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (side(mid, z) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Point LeafFamily::project(double sigma, const Point& z) const {
  Point w = z;
  for (int it = 0; it < 3; ++it) w = w - side(sigma, w) * normal(sigma, w);
  return w;
}

Point LeafFamily::disk_point(double sigma, const Point& q, const Vec3& t, double d) const {
  const Vec3 n = normal(sigma, q);
  Vec3 tt = t - dot(t, n) * n;
  const double tn = norm(tt);
  if (!(tn > 0.0)) throw Error("disk direction parallel to leaf normal");
  tt = tt / tn;
  const double k = curvature(sigma);
  if (std::abs(k) * d < 1e-12) return q + d * tt;
  const double x = std::min(1.0, d * std::abs(k) / 2.0);
  const double gamma = 2.0 * std::asin(x);
  return q + ((std::cos(gamma) - 1.0) / k) * n + (std::sin(gamma) / std::abs(k)) * tt;
}

Point Tube::core_point(double sigma) const {
  if (core.size() == 1) return core.front();
  if (sigma <= core_sigma.front()) return core.front();
  if (sigma >= core_sigma.back()) return core.back();
  const auto it = std::upper_bound(core_sigma.begin(), core_sigma.end(), sigma);
  const std::size_t k = static_cast<std::size_t>(it - core_sigma.begin()) - 1;
  const Point& a = core[k];
  const Point& b = core[k + 1];
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (leaves.side(sigma, lerp(a, b, mid)) < 0.0 ? lo : hi) = mid;
  }
  return lerp(a, b, 0.5 * (lo + hi));
}

// ---- neighborhood ----------------------------------------------------------

namespace {

// Distance from the center must increase strictly from vertex to vertex, and
// along every segment, until the polyline leaves the ball.
bool exits_monotonically(const std::vector<Point>& P, const Point& c, double r) {
  for (std::size_t i = 0; i + 1 < P.size(); ++i) {
    const double di = distance(P[i], c);
    if (di >= r) return true;
    if (!(distance(P[i + 1], c) > di)) return false;
    const Vec3 seg = P[i + 1] - P[i];
    if (dot(seg, P[i] - c) < -1e-12 * norm(seg) * std::max(di, 1e-300)) return false;
  }
  return true;
}

}  // namespace

NeighborhoodModel build_neighborhood(const EmbeddedGraph& g, const CornerDecomposition& d, const RadiiChain& chain) {
  if (!chain.consistent()) throw Error("inconsistent radii chain");
  const double r2 = chain.r2;
  NeighborhoodModel m;
  m.chain = chain;
  for (std::size_t i = 0; i < d.points.size(); ++i) m.balls.push_back({d.points[i].position, r2, i});
  for (std::size_t i = 0; i < m.balls.size(); ++i)
    for (std::size_t j = i + 1; j < m.balls.size(); ++j)
      if (distance(m.balls[i].center, m.balls[j].center) < 2.0 * r2 * (1.0 - 1e-12))
        throw NeighborhoodError("balls overlap");

  const double drift_limit = 2.0 * std::asin(1.0 / 6.0) + kAngleTolerance;
  const double angle_limit = kPi / 4.0 + kAngleTolerance;

  for (std::size_t k = 0; k < d.subarcs.size(); ++k) {
    const auto& s = d.subarcs[k];
    const PolylineArc poly = s.polyline(g);
    const Point c0 = d.points[s.start_point].position;
    const Point c1 = d.points[s.end_point].position;
    if (!exits_monotonically(poly.points, c0, r2) || !exits_monotonically(reversed(poly).points, c1, r2))
      throw NeighborhoodError("subarc " + std::to_string(k) + " does not exit its ball monotonically");

    Tube t;
    t.subarc = k;
    t.start_ball = s.start_point;
    t.end_ball = s.end_point;
    t.disk_radius = chain.r4;
    t.leaves = LeafFamily(c0, c1, r2);
    t.core = clip_to_balls(poly, c0, c1, r2).points;

    for (const auto& q : t.core)
      for (const auto& b : m.balls)
        if (distance(q, b.center) < r2 * (1.0 - 1e-9))
          throw NeighborhoodError("clipped piece re-enters a ball");

    if (t.core.size() == 1) {
      t.core_sigma = {t.leaves.sigma_of(t.core.front())};
    } else {
      t.core_sigma.resize(t.core.size());
      t.core_sigma.front() = 0.0;
      t.core_sigma.back() = 1.0;
      for (std::size_t i = 1; i + 1 < t.core.size(); ++i) t.core_sigma[i] = t.leaves.sigma_of(t.core[i]);
      for (std::size_t i = 0; i + 1 < t.core.size(); ++i)
        if (!(t.core_sigma[i + 1] > t.core_sigma[i]))
          throw NeighborhoodError("clipped piece is not monotone across the leaves");
      for (std::size_t i = 0; i + 1 < t.core.size(); ++i) {
        const Vec3 dir = t.core[i + 1] - t.core[i];
        for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) {
          const Point z = lerp(t.core[i], t.core[i + 1], u);
          const double a = angle_between(dir, t.leaves.normal(t.leaves.sigma_of(z), z));
          m.max_strand_normal_angle = std::max(m.max_strand_normal_angle, a);
        }
      }
      if (m.max_strand_normal_angle > angle_limit)
        throw NeighborhoodError("clipped piece is not transverse to the leaves");
    }

    for (std::size_t i = 0; i < t.core.size(); ++i) {
      const double sigma = t.core_sigma[i];
      const Point& q = t.core[i];
      const Vec3 n = t.leaves.normal(sigma, q);
      const Vec3 e1 = any_orthogonal(n);
      const Vec3 e2 = cross(n, e1);
      for (int j = 0; j < 8; ++j) {
        const double phi = 2.0 * kPi * j / 8.0;
        const Point z = t.leaves.disk_point(sigma, q, std::cos(phi) * e1 + std::sin(phi) * e2, chain.r4);
        m.max_disk_drift = std::max(m.max_disk_drift, angle_between(n, t.leaves.normal(sigma, z)));
      }
    }
    if (m.max_disk_drift > drift_limit) throw NeighborhoodError("leaf disks bend too much");
    m.tubes.push_back(std::move(t));
  }
  return m;
}

// ---- certificates ----------------------------------------------------------

std::string to_string(Refusal r) {
  switch (r) {
    case Refusal::None: return "none";
    case Refusal::DeltaTooLarge: return "delta-too-large";
    case Refusal::ThetaTooLarge: return "theta-too-large";
    case Refusal::NotContained: return "not-contained";
    case Refusal::NotTransverse: return "not-transverse";
  }
  return "unknown";
}

std::string to_string(Criterion c) { return c == Criterion::Thick ? "thick" : "ftc"; }

double link_thickness(const EmbeddedGraph& link) {
  double tau = kInf;
  const auto& arcs = link.arcs();
  for (const auto& a : arcs) {
    if (!a.curve.closed) throw Error("thickness needs closed components");
    tau = std::min(tau, discrete_thickness(a.curve).tau_hat);
  }
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (std::size_t j = i + 1; j < arcs.size(); ++j)
      tau = std::min(tau, arc_pair_distance(arcs[i].curve, arcs[j].curve));
  return tau;
}

IsotopyCertificate certify_thick(const EmbeddedGraph& k, const EmbeddedGraph& k2, const Correspondence& c,
                                 std::optional<double> tau) {
  k.validate(true);
  k2.validate(false);
  IsotopyCertificate cert;
  cert.criterion = Criterion::Thick;
  cert.tau = tau ? *tau : link_thickness(k);
  if (!(cert.tau > 0.0) || !std::isfinite(cert.tau)) throw Error("thickness must be positive and finite");
  cert.closeness = measure_closeness(k, k2, c);
  cert.refined_correspondence = c.refined;
  const double delta = cert.closeness.delta;
  cert.motion_bound = delta;
  if (!(delta < cert.tau / 4.0)) {
    cert.reason = Refusal::DeltaTooLarge;
    cert.detail = "delta " + std::to_string(delta) + " >= tau/4 " + std::to_string(cert.tau / 4.0);
    return cert;
  }
  cert.theta_limit = delta > 0.0 ? theta_of(delta, cert.tau) : kPi / 2.0;
  if (!(cert.closeness.theta < cert.theta_limit)) {
    cert.reason = Refusal::ThetaTooLarge;
    cert.detail = "theta " + std::to_string(cert.closeness.theta) + " >= " + std::to_string(cert.theta_limit);
    return cert;
  }
  cert.issued = true;
  return cert;
}

std::pair<CornerDecomposition, NeighborhoodModel> build_ftc_model(const EmbeddedGraph& g, double epsilon,
                                                                  const std::vector<ForcedPoint>& forced) {
  for (double budget : {kFtcBudget, kPi / 16.0 - 1e-9}) {
    try {
      auto d = corner_decomposition(g, budget, forced);
      const auto chain = ftc_radii(g, d, epsilon);
      auto m = build_neighborhood(g, d, chain);
      return {std::move(d), std::move(m)};
    } catch (const NeighborhoodError&) {
      if (budget != kFtcBudget) throw;
    }
  }
  throw Error("unreachable");
}

namespace {

std::size_t subarc_for(const CornerDecomposition& d, ArcId arc, double fraction) {
  std::size_t best = d.subarcs.size();
  for (std::size_t k = 0; k < d.subarcs.size(); ++k) {
    const auto& s = d.subarcs[k];
    if (s.arc != arc) continue;
    best = k;
    if (fraction <= s.end_fraction) return k;
  }
  if (best == d.subarcs.size()) throw Error("arc has no subarcs");
  return best;
}

// Samples the target against the ball-and-tube neighborhood: every point must
// sit in an end ball of its subarc or within 2 delta of the core point on its
// leaf, and the target must cross leaves within pi/4 of their normals.
void check_containment(const EmbeddedGraph& g2, const CornerDecomposition& d, const NeighborhoodModel& m,
                       const Correspondence& c, IsotopyCertificate& cert) {
  const double r2 = m.chain.r2;
  // Every leaf between two touching balls passes through their contact point.
  for (std::size_t k = 0; k < d.subarcs.size(); ++k) {
    const auto& s = d.subarcs[k];
    const double gap = distance(d.points[s.start_point].position, d.points[s.end_point].position) - 2.0 * r2;
    if (s.start_point != s.end_point && gap <= 1e-9 * r2) {
      cert.reason = Refusal::NotTransverse;
      cert.detail = "end balls of subarc " + std::to_string(k) + " touch, so its leaves meet at one point";
      return;
    }
  }
  const double reach = 2.0 * m.chain.delta;
  const double step = m.chain.delta / 2.0;
  for (const auto& ac : c.arcs) {
    const PolylineArc T = paired_target_curve(g2, ac.pairing);
    const auto cum = cumulative_lengths(T);
    const double L = cum.back();
    for (std::size_t i = 0; i < T.segment_count(); ++i) {
      const Vec3 dir = T.segment_vector(i);
      const double len = norm(dir);
      const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / step)));
      // Segment start, then n interior midpoints; the end is the next start.
      for (std::size_t j = 0; j <= n; ++j) {
        const bool interior = j > 0;
        const double u = interior ? (static_cast<double>(j) - 0.5) / static_cast<double>(n) : 0.0;
        const Point z = lerp(T.points[i], T.points[i + 1], u);
        const double f = ac.map.inverse((cum[i] + u * len) / L);
        const std::size_t k = subarc_for(d, ac.pairing.source, f);
        const auto& s = d.subarcs[k];
        const auto& tube = m.tubes[k];
        if (distance(z, d.points[s.start_point].position) < r2 || distance(z, d.points[s.end_point].position) < r2)
          continue;
        const double sigma = tube.leaves.sigma_of(z);
        const double gap = distance(z, tube.core_point(sigma));
        cert.max_leaf_distance = std::max(cert.max_leaf_distance, gap);
        if (!(gap < reach) && cert.reason == Refusal::None) {
          cert.reason = Refusal::NotContained;
          cert.detail = "target point " + std::to_string(gap) + " from the core on its leaf";
        }
        if (interior) {
          const double a = angle_between(dir, tube.leaves.normal(sigma, z));
          cert.max_leaf_angle = std::max(cert.max_leaf_angle, a);
          if (a > kPi / 4.0 && cert.reason == Refusal::None) {
            cert.reason = Refusal::NotTransverse;
            cert.detail = "target meets a leaf at " + std::to_string(a) + " rad from its normal";
          }
        }
      }
    }
  }
}

}  // namespace

FtcConstruction certify_ftc_construction(const EmbeddedGraph& g, const EmbeddedGraph& g2, double epsilon,
                                         CorrespondenceMode mode) {
  g.validate(true);
  g2.validate(true);
  FtcConstruction out;
  std::tie(out.decomposition, out.neighborhood) = build_ftc_model(g, epsilon);
  const RadiiChain& chain = out.neighborhood.chain;

  out.correspondence = default_correspondence(g, g2);
  if (mode == CorrespondenceMode::Refined) out.correspondence = refine_correspondence(g, g2, out.correspondence);
  auto& cert = out.certificate;
  cert.closeness = measure_closeness(g, g2, out.correspondence);
  if (mode == CorrespondenceMode::Auto && cert.closeness.delta > chain.delta) {
    auto refined = refine_correspondence(g, g2, out.correspondence);
    auto report = measure_closeness(g, g2, refined);
    if (report.delta < cert.closeness.delta) {
      out.correspondence = std::move(refined);
      cert.closeness = report;
    }
  }

  cert.criterion = Criterion::Ftc;
  cert.chain = chain;
  cert.budget = out.decomposition.budget;
  cert.motion_bound = epsilon;
  cert.theta_limit = kPi / 8.0;
  cert.refined_correspondence = out.correspondence.refined;
  if (cert.closeness.delta > chain.delta) {
    cert.reason = Refusal::DeltaTooLarge;
    cert.detail = "delta " + std::to_string(cert.closeness.delta) + " > " + std::to_string(chain.delta);
    return out;
  }
  if (cert.closeness.theta > kPi / 8.0) {
    cert.reason = Refusal::ThetaTooLarge;
    cert.detail = "theta " + std::to_string(cert.closeness.theta) + " > pi/8";
    return out;
  }
  check_containment(g2, out.decomposition, out.neighborhood, out.correspondence, cert);
  cert.issued = cert.reason == Refusal::None;
  return out;
}

LocalFlatness locally_flat_witness(const EmbeddedGraph& g, const Point& p0) {
  g.validate(true);
  const double tol = 1e-9 * std::max(1.0, g.diameter());
  double best = kInf;
  std::size_t arc_index = 0, seg = 0;
  double param = 0.0;
  for (std::size_t a = 0; a < g.arcs().size(); ++a) {
    const auto& P = g.arcs()[a].curve.points;
    for (std::size_t i = 0; i + 1 < P.size(); ++i) {
      const auto [dist, t] = point_segment_distance(p0, P[i], P[i + 1]);
      if (dist < best) {
        best = dist;
        arc_index = a;
        seg = i;
        param = t;
      }
    }
  }
  if (!(best <= tol)) throw Error("point is not on the graph");

  EmbeddedGraph h = g;
  auto& pts = h.arcs()[arc_index].curve.points;
  std::size_t index;
  if (distance(pts[seg], p0) <= tol) {
    index = seg;
  } else if (distance(pts[seg + 1], p0) <= tol) {
    index = seg + 1;
  } else {
    pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(seg) + 1, lerp(pts[seg], pts[seg + 1], param));
    index = seg + 1;
  }
  const ArcId arc = h.arcs()[arc_index].id;
  const auto [d, m] = build_ftc_model(h, kInf, {{arc, index}});

  std::size_t point = d.points.size();
  double nearest = kInf;
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    const double dist = distance(d.points[i].position, pts[index]);
    if (dist < nearest) {
      nearest = dist;
      point = i;
    }
  }
  LocalFlatness w;
  w.center = d.points[point].position;
  w.radius = m.chain.r2;
  w.radial = true;
  for (const auto& s : d.subarcs) {
    const PolylineArc poly = s.polyline(h);
    if (s.start_point == point) {
      ++w.strand_count;
      w.radial = w.radial && exits_monotonically(poly.points, w.center, w.radius);
    }
    if (s.end_point == point) {
      ++w.strand_count;
      w.radial = w.radial && exits_monotonically(reversed(poly).points, w.center, w.radius);
    }
  }
  return w;
}

}  // namespace ftc
