#include "ftc/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace ftc {

namespace {

std::vector<double> fractions(const PolylineArc& arc) {
  auto c = cumulative_lengths(arc);
  const double total = c.back();
  for (auto& v : c) v /= total;
  c.back() = 1.0;
  return c;
}

std::size_t segment_at(const std::vector<double>& frac, double f) {
  auto it = std::upper_bound(frac.begin(), frac.end(), f);
  std::size_t i = it == frac.begin() ? 0 : static_cast<std::size_t>(it - frac.begin()) - 1;
  return std::min(i, frac.size() - 2);
}

Point point_at_fraction(const PolylineArc& arc, const std::vector<double>& frac, double f) {
  if (f <= 0.0) return arc.points.front();
  if (f >= 1.0) return arc.points.back();
  const std::size_t i = segment_at(frac, f);
  const double w = frac[i + 1] - frac[i];
  return lerp(arc.points[i], arc.points[i + 1], w > 0.0 ? (f - frac[i]) / w : 0.0);
}

double interpolate(const std::vector<std::pair<double, double>>& bp, double x, bool forward) {
  auto key = [&](const std::pair<double, double>& p) { return forward ? p.first : p.second; };
  auto val = [&](const std::pair<double, double>& p) { return forward ? p.second : p.first; };
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  std::size_t lo = 0, hi = bp.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (key(bp[mid]) <= x) lo = mid; else hi = mid;
  }
  const double k0 = key(bp[lo]), k1 = key(bp[hi]);
  const double t = (x - k0) / (k1 - k0);
  return val(bp[lo]) + t * (val(bp[hi]) - val(bp[lo]));
}

}  // namespace

ParameterMap::ParameterMap() : bp_{{0.0, 0.0}, {1.0, 1.0}} {}

ParameterMap::ParameterMap(std::vector<std::pair<double, double>> breakpoints) : bp_(std::move(breakpoints)) {
  if (bp_.size() < 2 || bp_.front() != std::pair{0.0, 0.0} || bp_.back() != std::pair{1.0, 1.0})
    throw Error("parameter map must run from (0,0) to (1,1)");
  for (std::size_t i = 1; i < bp_.size(); ++i)
    if (!(bp_[i].first > bp_[i - 1].first) || !(bp_[i].second > bp_[i - 1].second))
      throw Error("parameter map must be strictly increasing");
}

double ParameterMap::forward(double s) const { return interpolate(bp_, s, true); }
double ParameterMap::inverse(double s2) const { return interpolate(bp_, s2, false); }

ParameterMap ParameterMap::inverted() const {
  std::vector<std::pair<double, double>> inv;
  inv.reserve(bp_.size());
  for (const auto& [a, b] : bp_) inv.emplace_back(b, a);
  return ParameterMap(std::move(inv));
}

Correspondence Correspondence::inverse() const {
  Correspondence out;
  out.refined = refined;
  for (const auto& ac : arcs) {
    ArcCorrespondence r;
    r.pairing = {ac.pairing.target, ac.pairing.source, ac.pairing.reversed};
    r.map = ac.map.inverted();
    out.arcs.push_back(std::move(r));
  }
  return out;
}

const ArcCorrespondence& Correspondence::for_source(ArcId source) const {
  for (const auto& ac : arcs)
    if (ac.pairing.source == source) return ac;
  throw Error("correspondence has no entry for arc " + std::to_string(source));
}

std::vector<ArcPairing> default_pairing(const EmbeddedGraph& g, const EmbeddedGraph& g2) {
  if (g.arcs().size() != g2.arcs().size()) throw Error("graphs have different arc counts");
  std::vector<ArcPairing> out;
  bool by_id = true;
  for (const auto& a : g.arcs()) {
    bool found = false;
    for (const auto& b : g2.arcs()) found = found || b.id == a.id;
    by_id = by_id && found;
  }
  for (std::size_t i = 0; i < g.arcs().size(); ++i) {
    const ArcId s = g.arcs()[i].id;
    out.push_back({s, by_id ? s : g2.arcs()[i].id, false});
  }
  return out;
}

namespace {

void check_isomorphism(const EmbeddedGraph& g, const EmbeddedGraph& g2, const std::vector<ArcPairing>& pairing) {
  if (pairing.size() != g.arcs().size() || g.arcs().size() != g2.arcs().size())
    throw Error("pairing is not a bijection between arcs");
  if (g.vertices().size() != g2.vertices().size()) throw Error("graphs have different vertex counts");
  std::map<VertexId, VertexId> vmap, vinv;
  std::map<ArcId, int> used_src, used_dst;
  auto bind = [&](VertexId a, VertexId b) {
    auto [it, fresh] = vmap.emplace(a, b);
    auto [jt, fresh2] = vinv.emplace(b, a);
    if (it->second != b || jt->second != a)
      throw Error("pairing does not respect vertex incidences (vertex " + std::to_string(a) + ")");
  };
  for (const auto& p : pairing) {
    if (used_src[p.source]++ || used_dst[p.target]++) throw Error("pairing uses an arc twice");
    const Arc& a = g.arc(p.source);
    const Arc& b = g2.arc(p.target);
    if (a.curve.closed != b.curve.closed) throw Error("pairing matches a closed arc with an open one");
    bind(a.head, p.reversed ? b.tail : b.head);
    bind(a.tail, p.reversed ? b.head : b.tail);
  }
}

}  // namespace

PolylineArc paired_target_curve(const EmbeddedGraph& g2, const ArcPairing& p) {
  const auto& c = g2.arc(p.target).curve;
  return p.reversed ? reversed(c) : c;
}

Correspondence default_correspondence(const EmbeddedGraph& g, const EmbeddedGraph& g2,
                                      const std::vector<ArcPairing>& pairing) {
  check_isomorphism(g, g2, pairing);
  Correspondence c;
  for (const auto& p : pairing) c.arcs.push_back({p, ParameterMap()});
  return c;
}

Correspondence default_correspondence(const EmbeddedGraph& g, const EmbeddedGraph& g2) {
  return default_correspondence(g, g2, default_pairing(g, g2));
}

Correspondence index_correspondence(const EmbeddedGraph& g, const EmbeddedGraph& g2) {
  const auto pairing = default_pairing(g, g2);
  check_isomorphism(g, g2, pairing);
  Correspondence c;
  for (const auto& p : pairing) {
    const auto fa = fractions(g.arc(p.source).curve);
    const auto fb = fractions(paired_target_curve(g2, p));
    if (fa.size() != fb.size()) throw Error("index correspondence needs equal point counts");
    std::vector<std::pair<double, double>> bp;
    for (std::size_t i = 0; i < fa.size(); ++i) bp.emplace_back(fa[i], fb[i]);
    c.arcs.push_back({p, ParameterMap(std::move(bp))});
  }
  return c;
}

ClosenessReport measure_arc_closeness(const PolylineArc& a, const PolylineArc& b, const ParameterMap& map, ArcId id) {
  const auto fa = fractions(a);
  const auto fb = fractions(b);
  std::vector<double> s = fa;
  for (const auto& [x, y] : map.breakpoints()) s.push_back(x);
  for (double f : fb) s.push_back(map.inverse(f));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());

  ClosenessReport r;
  r.delta = -1.0;
  for (double x : s) {
    const Point pa = point_at_fraction(a, fa, x);
    const Point pb = point_at_fraction(b, fb, map.forward(x));
    const double d = distance(pa, pb);
    if (d > r.delta) {
      r.delta = d;
      r.delta_witness = {id, x, pa, pb};
    }
  }
  r.theta = -1.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    // Slivers between breakpoints that agree up to round-off carry no measure.
    if (s[k + 1] - s[k] <= 1e-12) continue;
    const double mid = 0.5 * (s[k] + s[k + 1]);
    const std::size_t ia = segment_at(fa, mid);
    const std::size_t ib = segment_at(fb, map.forward(mid));
    const double ang = angle_between(a.segment_vector(ia), b.segment_vector(ib));
    if (ang > r.theta) {
      r.theta = ang;
      r.theta_witness = {id, mid, point_at_fraction(a, fa, mid), point_at_fraction(b, fb, map.forward(mid))};
    }
  }
  r.theta = std::max(r.theta, 0.0);
  return r;
}

ClosenessReport measure_closeness(const EmbeddedGraph& g, const EmbeddedGraph& g2, const Correspondence& c) {
  ClosenessReport total;
  bool first = true;
  for (const auto& ac : c.arcs) {
    const auto r = measure_arc_closeness(g.arc(ac.pairing.source).curve, paired_target_curve(g2, ac.pairing), ac.map,
                                         ac.pairing.source);
    if (first || r.delta > total.delta) {
      total.delta = r.delta;
      total.delta_witness = r.delta_witness;
    }
    if (first || r.theta > total.theta) {
      total.theta = r.theta;
      total.theta_witness = r.theta_witness;
    }
    first = false;
  }
  return total;
}

namespace {

std::vector<double> sample_fractions(const std::vector<double>& vertex_fracs, std::size_t uniform) {
  std::vector<double> f = vertex_fracs;
  for (std::size_t i = 0; i <= uniform; ++i) f.push_back(static_cast<double>(i) / static_cast<double>(uniform));
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end(), [](double x, double y) { return y - x < 1e-13; }), f.end());
  f.front() = 0.0;
  f.back() = 1.0;
  return f;
}

ParameterMap frechet_map(const PolylineArc& a, const PolylineArc& b) {
  const auto fa = fractions(a);
  const auto fb = fractions(b);
  const std::size_t grid = std::clamp<std::size_t>(4 * std::max(fa.size(), fb.size()), 64, 800);
  const auto sa = sample_fractions(fa, grid);
  const auto sb = sample_fractions(fb, grid);
  std::vector<Point> pa, pb;
  for (double f : sa) pa.push_back(point_at_fraction(a, fa, f));
  for (double f : sb) pb.push_back(point_at_fraction(b, fb, f));
  const std::size_t n = pa.size(), m = pb.size();
  std::vector<double> cost(n * m);
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double prev = inf;
      if (i == 0 && j == 0) prev = 0.0;
      if (i > 0) prev = std::min(prev, cost[(i - 1) * m + j]);
      if (j > 0) prev = std::min(prev, cost[i * m + j - 1]);
      if (i > 0 && j > 0) prev = std::min(prev, cost[(i - 1) * m + j - 1]);
      cost[i * m + j] = std::max(prev, distance(pa[i], pb[j]));
    }
  }
  // backtrack, preferring diagonal steps so the coupling stays balanced
  std::vector<std::pair<std::size_t, std::size_t>> path{{n - 1, m - 1}};
  std::size_t i = n - 1, j = m - 1;
  while (i > 0 || j > 0) {
    double best = inf;
    std::size_t bi = i, bj = j;
    if (i > 0 && j > 0 && cost[(i - 1) * m + j - 1] <= best) best = cost[(i - 1) * m + j - 1], bi = i - 1, bj = j - 1;
    if (i > 0 && cost[(i - 1) * m + j] < best) best = cost[(i - 1) * m + j], bi = i - 1, bj = j;
    if (j > 0 && cost[i * m + j - 1] < best) best = cost[i * m + j - 1], bi = i, bj = j - 1;
    i = bi;
    j = bj;
    path.emplace_back(i, j);
  }
  std::reverse(path.begin(), path.end());
  std::vector<std::pair<double, double>> bp{{0.0, 0.0}};
  for (const auto& [pi, pj] : path) {
    const double x = sa[pi], y = sb[pj];
    if (x > bp.back().first && y > bp.back().second && x < 1.0 && y < 1.0) bp.emplace_back(x, y);
  }
  bp.emplace_back(1.0, 1.0);
  return ParameterMap(std::move(bp));
}

}  // namespace

Correspondence refine_correspondence(const EmbeddedGraph& g, const EmbeddedGraph& g2, const Correspondence& c) {
  Correspondence out = c;
  out.refined = true;
  for (auto& ac : out.arcs) {
    const auto& a = g.arc(ac.pairing.source).curve;
    const auto b = paired_target_curve(g2, ac.pairing);
    const double before = measure_arc_closeness(a, b, ac.map, ac.pairing.source).delta;
    ParameterMap candidate = frechet_map(a, b);
    const double after = measure_arc_closeness(a, b, candidate, ac.pairing.source).delta;
    if (after < before) ac.map = std::move(candidate);
  }
  return out;
}

double circumradius(const Point& a, const Point& b, const Point& c) {
  const double ab = distance(a, b), bc = distance(b, c), ca = distance(c, a);
  const double area2 = norm(cross(b - a, c - a));
  if (!(area2 > 0.0)) return std::numeric_limits<double>::infinity();
  return ab * bc * ca / (2.0 * area2);
}

ThicknessReport discrete_thickness(const PolylineArc& loop) {
  if (!loop.closed) throw Error("discrete_thickness needs a closed polyline");
  const std::size_t n = loop.points.size() - 1;
  if (n < 4) throw Error("discrete_thickness needs at least four vertices");
  const auto& P = loop.points;
  auto at = [&](std::ptrdiff_t i) -> const Point& { return P[static_cast<std::size_t>((i % static_cast<std::ptrdiff_t>(n) + n) % n)]; };
  const auto turns_full = turning_angles(loop);
  std::vector<double> turn(turns_full.begin(), turns_full.end() - 1);
  std::vector<Vec3> dir(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = P[i + 1] - P[i];
    dir[i] = d / norm(d);
  }

  ThicknessReport r;
  r.min_rad = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double rad = circumradius(at(static_cast<std::ptrdiff_t>(i) - 1), P[i], at(static_cast<std::ptrdiff_t>(i) + 1));
    if (rad < r.min_rad) {
      r.min_rad = rad;
      r.triple_center = i;
    }
  }

  std::vector<double> allow(n);
  for (std::size_t i = 0; i < n; ++i)
    allow[i] = std::max({turn[(i + n - 1) % n], turn[i], turn[(i + 1) % n]});
  std::vector<double> prefix(2 * n + 1, 0.0);
  for (std::size_t i = 0; i < 2 * n; ++i) prefix[i + 1] = prefix[i] + turn[i % n];
  auto turning_between = [&](std::size_t i, std::size_t j) {  // inclusive, forward from i to j
    const std::size_t jj = j >= i ? j : j + n;
    return prefix[jj + 1] - prefix[i];
  };
  auto perpendicular_at = [&](std::size_t i, const Vec3& chord_unit) {
    const double slack = allow[i] >= kPi ? 1.0 : std::sin(allow[i] / 2.0);
    const Vec3& din = dir[(i + n - 1) % n];
    const Vec3& dout = dir[i];
    return std::abs(dot(chord_unit, din)) <= slack + 1e-9 && std::abs(dot(chord_unit, dout)) <= slack + 1e-9;
  };

  r.dcsd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (n - (j - i) < 2) continue;
      const Vec3 c = P[j] - P[i];
      const double len = norm(c);
      if (!(len < r.dcsd)) continue;
      const Vec3 u = c / len;
      if (!perpendicular_at(i, u) || !perpendicular_at(j, u)) continue;
      const double need = kPi - allow[i] - allow[j] - 1e-9;
      if (turning_between(i, j) < need || turning_between(j, i) < need) continue;
      r.dcsd = len;
      r.pair = {i, j};
    }
  }
  const double curv = 2.0 * r.min_rad;
  r.tau_hat = std::min(curv, r.dcsd);
  // Ties up to round-off (regular polygons) are reported as curvature.
  r.mechanism = curv <= r.dcsd * (1.0 + 1e-12) ? ThicknessMechanism::Curvature : ThicknessMechanism::SelfDistance;
  return r;
}

double distortion(const PolylineArc& arc) {
  const auto c = cumulative_lengths(arc);
  const double total = c.back();
  const std::size_t n = arc.closed ? arc.points.size() - 1 : arc.points.size();
  double best = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double along = c[j] - c[i];
      if (arc.closed) along = std::min(along, total - along);
      const double chord = distance(arc.points[i], arc.points[j]);
      if (chord > 0.0) best = std::max(best, along / chord);
    }
  }
  return best;
}

double chord_angle_modulus(const PolylineArc& arc, double theta) {
  if (!(theta > 0.0) || theta > kPi / 2 + kAngleTolerance) throw Error("chord_angle_modulus: theta must lie in (0, pi/2]");
  const auto c = cumulative_lengths(arc);
  const double total = c.back();
  const std::size_t nseg = arc.segment_count();
  std::vector<Vec3> dir(nseg);
  for (std::size_t i = 0; i < nseg; ++i) dir[i] = arc.segment_vector(i) / norm(arc.segment_vector(i));

  // Candidate endpoints indexed by q: q = 2i is point i, q = 2i + 1 the
  // midpoint of segment i. Loops are unrolled once.
  const std::size_t per_turn = 2 * nseg;
  const std::size_t base_count = arc.closed ? per_turn : per_turn + 1;
  const std::size_t count = arc.closed ? 2 * per_turn : per_turn + 1;
  auto pos = [&](std::size_t q) {
    const std::size_t r = q % per_turn;
    const double wraps = arc.closed ? static_cast<double>(q / per_turn) : 0.0;
    const double base = (q == per_turn && !arc.closed) ? total : ((r % 2 == 0) ? c[r / 2] : 0.5 * (c[r / 2] + c[r / 2 + 1]));
    return base + wraps * total;
  };
  auto point_at = [&](std::size_t q) {
    if (!arc.closed && q == per_turn) return arc.points.back();
    const std::size_t r = q % per_turn;
    const std::size_t i = r / 2;
    return (r % 2 == 0) ? arc.points[i] : lerp(arc.points[i], arc.points[i + 1], 0.5);
  };
  // Unrolled segment indices covered by the subarc from q = a to q = b.
  auto first_segment = [](std::size_t a) { return a / 2; };
  auto last_segment = [](std::size_t b) { return (b % 2 == 0) ? b / 2 - 1 : b / 2; };
  const double cos_limit = std::cos(theta + kAngleTolerance);

  auto scale_passes = [&](double ell) {
    for (std::size_t a = 0; a < base_count; ++a) {
      for (std::size_t b = a + 1; b < count; ++b) {
        const double span = pos(b) - pos(a);
        if (span > ell * (1.0 + 1e-12)) break;
        if (arc.closed && span >= total) break;
        const Vec3 chord = point_at(b) - point_at(a);
        const double len = norm(chord);
        if (!(len > 0.0)) return false;
        const Vec3 u = chord / len;
        for (std::size_t k = first_segment(a); k <= last_segment(b); ++k)
          if (dot(dir[k % nseg], u) < cos_limit) return false;
      }
    }
    return true;
  };

  double best = 0.0;
  for (int k = 20; k >= 0; --k) {
    const double ell = total / std::ldexp(1.0, k);
    if (!scale_passes(ell)) break;
    best = ell;
  }
  if (!(best > 0.0)) throw Error("chord_angle_modulus: curve too rough at the finest sampling scale");
  return best;
}

}  // namespace ftc
