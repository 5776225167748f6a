#include "ftc/isotopy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <thread>

namespace ftc {

unsigned worker_count() {
  unsigned n = 0;
  if (const char* env = std::getenv("FTC_ISOTOPY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) n = static_cast<unsigned>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

namespace {

// Parallel loop over [0, n) with a static split.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) f(i);
    });
  for (auto& t : pool) t.join();
}

// Positive root s of |origin + s dir - center| = r for origin inside the ball.
double ray_exit(const Point& origin, const Vec3& dir, const Point& center, double r) {
  const Vec3 f = origin - center;
  const double b = dot(f, dir);
  const double c = dot(f, f) - r * r;
  return -b + std::sqrt(std::max(0.0, b * b - c));
}

Vec3 unit(const Vec3& v) { return v / norm(v); }

}  // namespace

// ---- stage I -----------------------------------------------------------------

RadialBallMap::RadialBallMap(const Point& center, double radius, const Point& moving)
    : center_(center), radius_(radius), moving_(moving) {
  if (!(distance(moving, center) < radius)) throw Error("moving point lies outside its ball");
}

Point RadialBallMap::operator()(const Point& x, double t) const {
  if (t == 0.0 || !(distance(x, center_) < radius_)) return x;
  const Point ct = moving_ + t * (center_ - moving_);
  const Vec3 d = x - moving_;
  const double len = norm(d);
  if (len == 0.0) return ct;
  const Vec3 dir = d / len;
  const double s = ray_exit(moving_, dir, center_, radius_);
  const Point q = moving_ + s * dir;
  const double lambda = len / s;
  return ct + lambda * (q - ct);
}

std::vector<Point> radial_ball_isotopy(const Ball& ball, const Point& moving, const std::vector<Point>& points, double t) {
  const RadialBallMap map(ball.center, ball.radius, moving);
  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(map(p, t));
  return out;
}

// ---- combing -------------------------------------------------------------

Combing::Combing(const Point& center, double radius, std::vector<std::vector<Point>> strands)
    : center_(center), radius_(radius), strands_(std::move(strands)) {
  if (!(radius > 0.0)) throw Error("combing ball needs a positive radius");
  const double tol = 1e-9 * radius;
  for (auto& s : strands_) {
    if (s.size() < 2) throw Error("strand needs at least two points");
    if (distance(s.front(), center) > tol) throw Error("strand does not start at the center");
    if (std::abs(distance(s.back(), center) - radius) > tol) throw Error("strand does not end on the sphere");
    s.front() = center;
    std::vector<double> sc(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) sc[k] = distance(s[k], center) / radius;
    sc.back() = 1.0;
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
      if (!(sc[k + 1] > sc[k])) throw Error("strand is not radially monotone");
    scales_.push_back(std::move(sc));
    const Vec3 end = s.back() - center;
    bool straight = true;
    for (std::size_t k = 1; k < s.size() && straight; ++k)
      straight = angle_between(s[k] - center, end) <= 1e-15;
    straight_.push_back(straight);
  }

  // Strands must stay apart on every sphere; the closest approach also sets
  // the support of the bumps used by the ambient flow.
  double closest = kPi;
  std::vector<double> probe;
  for (const auto& sc : scales_)
    for (std::size_t k = 1; k < sc.size(); ++k) {
      probe.push_back(sc[k]);
      probe.push_back(0.5 * (sc[k - 1] + sc[k]));
    }
  for (double mu : probe)
    for (std::size_t i = 0; i < strands_.size(); ++i)
      for (std::size_t j = i + 1; j < strands_.size(); ++j)
        closest = std::min(closest, angle_between(direction(i, mu), direction(j, mu)));
  if (!(closest > 0.0)) throw Error("two strands meet on a sphere");
  bump_support_ = std::min(closest / 2.0, kPi / 8.0);
}

Vec3 Combing::direction(std::size_t i, double mu) const {
  const auto& s = strands_[i];
  const auto& sc = scales_[i];
  mu = std::clamp(mu, 0.0, 1.0);
  auto it = std::upper_bound(sc.begin(), sc.end(), mu);
  std::size_t k = it == sc.begin() ? 0 : static_cast<std::size_t>(it - sc.begin()) - 1;
  k = std::min(k, s.size() - 2);
  if (k == 0) return unit(s[1] - center_);
  if (mu == sc[k]) return unit(s[k] - center_);
  // Radius is monotone along the segment; take the exit of the sphere of scale mu.
  const Vec3 d = s[k + 1] - s[k];
  const double len = norm(d);
  const double tau = std::clamp(ray_exit(s[k], d / len, center_, mu * radius_) / len, 0.0, 1.0);
  return unit(lerp(s[k], s[k + 1], tau) - center_);
}

Point Combing::strand_point(std::size_t i, const Point& x, double t) const {
  const double lambda = distance(x, center_) / radius_;
  if (t == 0.0 || straight(i) || lambda == 0.0 || lambda >= 1.0) return x;
  const double mu = lambda + (1.0 - lambda) * t;
  return center_ + (lambda * radius_) * direction(i, mu);
}

Point Combing::at_scale(std::size_t i, double lambda, double t) const {
  if (lambda <= 0.0) return center_;
  return center_ + (lambda * radius_) * direction(i, lambda + (1.0 - lambda) * t);
}

Vec3 Combing::flow_velocity(const Vec3& v, double mu, double lo, double hi) const {
  Vec3 vel{};
  const double h = std::min(1e-6, 0.25 * (hi - lo));
  for (std::size_t i = 0; i < strands_.size(); ++i) {
    const Vec3 u = direction(i, mu);
    const double a = angle_between(v, u) / bump_support_;
    if (a >= 1.0) continue;
    // Difference quotient kept inside [lo, hi], where every strand is smooth.
    const double a0 = std::max(lo, mu - h), a1 = std::min(hi, mu + h);
    const Vec3 w = (direction(i, a1) - direction(i, a0)) / (a1 - a0);
    const double bump = (1.0 - a * a) * (1.0 - a * a);
    vel += bump * (w - dot(w, v) * v);
  }
  return vel;
}

Point Combing::ambient(const Point& x, double t) const {
  const double r = distance(x, center_);
  const double lambda = r / radius_;
  if (t == 0.0 || lambda >= 1.0 || lambda == 0.0) return x;
  const double mu = lambda + (1.0 - lambda) * t;
  Vec3 v = (x - center_) / r;
  // Integrate piece by piece between consecutive strand vertex scales.
  std::vector<double> cuts{lambda, mu};
  for (const auto& sc : scales_)
    for (double c : sc)
      if (c > lambda && c < mu) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double lo = cuts[p], hi = cuts[p + 1];
    if (hi - lo < 1e-13) continue;
    const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) / 1e-3)));
    const double h = (hi - lo) / steps;
    for (int k = 0; k < steps; ++k) {
      const double nu = lo + k * h;
      const Vec3 k1 = flow_velocity(v, nu, lo, hi);
      const Vec3 k2 = flow_velocity(unit(v + 0.5 * h * k1), nu + 0.5 * h, lo, hi);
      const Vec3 k3 = flow_velocity(unit(v + 0.5 * h * k2), nu + 0.5 * h, lo, hi);
      const Vec3 k4 = flow_velocity(unit(v + h * k3), nu + h, lo, hi);
      v = unit(v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }
  }
  return center_ + r * v;
}

std::vector<std::vector<Point>> combing_isotopy(const Point& center, double radius,
                                                const std::vector<std::vector<Point>>& strands, double t) {
  const Combing c(center, radius, strands);
  std::vector<std::vector<Point>> out(strands.size());
  for (std::size_t i = 0; i < strands.size(); ++i)
    for (const auto& p : strands[i]) out[i].push_back(c.strand_point(i, p, t));
  return out;
}

// ---- leaf disks ----------------------------------------------------------------

Point leaf_isotopy(const LeafFamily& leaves, double sigma, const Point& center, double disk_radius,
                   const Point& source, double s, const Point& w) {
  if (s == 0.0) return w;
  const Vec3 n = leaves.normal(sigma, center);
  const double k = leaves.curvature(sigma);
  const auto flat = [&](const Point& p) {
    const Vec3 d = p - center;
    return d - dot(d, n) * n;
  };
  const auto lift = [&](const Vec3& v) {
    const double vv = dot(v, v);
    const double x = std::min(1.0, k * k * vv);
    return center + v - (k * vv / (1.0 + std::sqrt(1.0 - x))) * n;
  };
  const Vec3 a = flat(source);
  if (norm(a) > disk_radius * (1.0 + 1e-12)) throw Error("source point lies outside its leaf disk");
  const Vec3 v = flat(w);
  if (norm(v) >= disk_radius) return w;
  const Vec3 as = (1.0 - s) * a;
  const Vec3 d = v - a;
  const double len = norm(d);
  if (len == 0.0) return lift(as);
  const Vec3 dir = d / len;
  const double b = dot(a, dir);
  const double tau = -b + std::sqrt(std::max(0.0, b * b - (dot(a, a) - disk_radius * disk_radius)));
  const Vec3 q = a + tau * dir;
  return lift(as + (len / tau) * (q - as));
}

// ---- smallness -------------------------------------------------------------

Smallness smallness_verifier(const DisplacementField& field) {
  const auto& s = field.samples;
  if (s.size() < 2) throw Error("smallness needs at least two samples");
  Smallness out;
  for (const auto& [p, f] : s) out.delta = std::max(out.delta, norm(f));
  bool any = false;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double d = distance(s[i].first, s[j].first);
      if (d == 0.0) continue;
      any = true;
      out.lipschitz = std::max(out.lipschitz, distance(s[i].second, s[j].second) / d);
    }
  if (!any) throw Error("all samples coincide");
  out.theta_bound = std::atan(out.lipschitz);
  return out;
}

// ---- FTC isotopy ---------------------------------------------------------------

struct FtcIsotopy::Tracked {
  bool in_ball = true;
  Point origin;  // position on g2
  std::size_t ball = 0;
  std::size_t strand = 0;
  Point staged;  // after the ball stage
  double scale = 0.0;
  std::size_t tube = 0;
  double sigma = 0.0;
  Point core;
};

struct FtcIsotopy::BallStrands {
  std::vector<std::vector<Point>> target_strands;
  std::vector<std::vector<Point>> source_strands;
  std::optional<Combing> target;  // g2 strands after the ball stage
  std::optional<Combing> source;  // g strands
  std::vector<Point> exit;        // where each target strand leaves the ball
  std::vector<Point> core_end;    // where the matching core piece meets the ball
  std::vector<std::size_t> tube;
  std::vector<double> leaf;  // 0 at the start ball of a tube, 1 at its end ball
};

namespace {

// Solves f(u) = target for u in [lo, hi] with f monotone.
template <class F>
double bisect(F&& f, double lo, double hi, double target, bool increasing) {
  const double flo = f(lo), fhi = f(hi);
  const bool ok = increasing ? (flo <= target && target <= fhi) : (flo >= target && target >= fhi);
  if (!ok)
    throw Error("tracked point is not bracketed: target not monotone along its strand (" + std::to_string(flo) + ", " +
                std::to_string(fhi) + " vs " + std::to_string(target) + ")");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const bool below = increasing ? f(mid) < target : f(mid) > target;
    (below ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Sorted union of two parameter lists in which values closer than `gap`
// collapse to one; members of `keep` win over members of `extra`.
std::vector<double> merge_parameters(std::vector<double> keep, std::vector<double> extra, double gap) {
  std::vector<std::pair<double, int>> all;
  for (double u : keep) all.emplace_back(u, 0);
  for (double u : extra) all.emplace_back(u, 1);
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    double chosen = all[i].first;
    bool from_keep = all[i].second == 0;
    while (j + 1 < all.size() && all[j + 1].first - all[j].first < gap) {
      ++j;
      if (!from_keep && all[j].second == 0) {
        chosen = all[j].first;
        from_keep = true;
      }
    }
    out.push_back(chosen);
    i = j + 1;
  }
  return out;
}

struct SubarcSpan {
  std::size_t subarc = 0;
  double u0 = 0.0, u1 = 0.0;          // target fractions of p'_start and p'_end
  double exit = 0.0, entry = 0.0;     // target fractions of the ball crossings
  std::size_t start_strand = 0, end_strand = 0;
};

}  // namespace

FtcIsotopy::FtcIsotopy(const EmbeddedGraph& g, const EmbeddedGraph& g2, const FtcConstruction& construction)
    : model_(&construction.neighborhood) {
  const auto& d = construction.decomposition;
  const auto& m = construction.neighborhood;
  const auto& corr = construction.correspondence;
  const double r2 = m.chain.r2;
  const double r4 = m.chain.r4;
  const double step = std::min(r4, r2 / 4.0);

  // Points of g2 that correspond to the decomposition points.
  std::vector<Point> moving(d.points.size());
  for (std::size_t j = 0; j < d.points.size(); ++j) {
    const auto& dp = d.points[j];
    const Arc& a = g.arc(dp.arc);
    const auto cum = cumulative_lengths(a.curve);
    const double f = cum[dp.index] / cum.back();
    const auto& ac = corr.for_source(dp.arc);
    const PolylineArc T2 = paired_target_curve(g2, ac.pairing);
    const auto cum2 = cumulative_lengths(T2);
    moving[j] = point_at_length(T2, cum2, ac.map.forward(f) * cum2.back());
    stage_one_.emplace_back(dp.position, r2, moving[j]);
  }
  balls_.resize(d.points.size());

  for (const auto& arc : g.arcs()) {
    const auto& ac = corr.for_source(arc.id);
    const PolylineArc T2 = paired_target_curve(g2, ac.pairing);
    const auto cum2 = cumulative_lengths(T2);
    const double L2 = cum2.back();
    const auto at = [&](double u) { return point_at_length(T2, cum2, u * L2); };
    std::vector<double> vertex_u(cum2.size());
    for (std::size_t i = 0; i < cum2.size(); ++i) vertex_u[i] = cum2[i] / L2;

    std::vector<double> params = vertex_u;
    for (std::size_t i = 0; i + 1 < cum2.size(); ++i) {
      const int pieces = static_cast<int>(std::ceil((cum2[i + 1] - cum2[i]) / step));
      for (int p = 1; p < pieces; ++p) params.push_back((cum2[i] + (cum2[i + 1] - cum2[i]) * p / pieces) / L2);
    }

    std::vector<double> special;
    std::vector<SubarcSpan> spans;
    for (std::size_t k = 0; k < d.subarcs.size(); ++k) {
      const auto& s = d.subarcs[k];
      if (s.arc != arc.id) continue;
      const Point c0 = d.points[s.start_point].position;
      const Point c1 = d.points[s.end_point].position;
      SubarcSpan span;
      span.subarc = k;
      span.u0 = ac.map.forward(s.begin_fraction);
      span.u1 = ac.map.forward(s.end_fraction);

      // First crossing of the start sphere and last crossing of the end sphere.
      const auto dist0 = [&](double u) { return distance(at(u), c0); };
      const auto dist1 = [&](double u) { return distance(at(u), c1); };
      std::vector<double> inner{span.u0};
      for (double u : vertex_u)
        if (u > span.u0 && u < span.u1) inner.push_back(u);
      inner.push_back(span.u1);
      std::size_t a = 1;
      while (a < inner.size() && dist0(inner[a]) < r2) ++a;
      if (a == inner.size()) throw Error("target strand never leaves its ball");
      span.exit = bisect(dist0, inner[a - 1], inner[a], r2, true);
      std::size_t b = inner.size() - 2;
      while (b > 0 && dist1(inner[b]) < r2) --b;
      if (dist1(inner[b]) < r2) throw Error("target strand never leaves its ball");
      span.entry = bisect(dist1, inner[b], inner[b + 1], r2, false);
      if (span.exit > span.entry) throw Error("target strand crosses between balls without a tube piece");
      for (std::size_t i = a; i <= b; ++i)
        if (inner[i] > span.exit && inner[i] < span.entry && (dist0(inner[i]) < r2 || dist1(inner[i]) < r2))
          throw Error("target re-enters a ball inside a tube");

      special.insert(special.end(), {span.u0, span.u1, span.exit, span.entry});
      // Radii of g's strand vertices inside each ball, on the staged target.
      const auto& P = arc.curve.points;
      const RadialBallMap& phi0 = stage_one_[s.start_point];
      const RadialBallMap& phi1 = stage_one_[s.end_point];
      const auto staged0 = [&](double u) { return distance(phi0(at(u), 1.0), c0); };
      const auto staged1 = [&](double u) { return distance(phi1(at(u), 1.0), c1); };
      for (std::size_t i = s.begin + 1; i < s.end && distance(P[i], c0) < r2; ++i)
        special.push_back(bisect(staged0, span.u0, span.exit, distance(P[i], c0), true));
      for (std::size_t i = s.end - 1; i > s.begin && distance(P[i], c1) < r2; --i)
        special.push_back(bisect(staged1, span.entry, span.u1, distance(P[i], c1), false));
      // Leaves through g's core vertices.
      const Tube& tube = m.tubes[k];
      const auto sig = [&](double u) { return tube.leaves.sigma_of(at(u)); };
      for (std::size_t i = 1; i + 1 < tube.core.size(); ++i)
        special.push_back(bisect(sig, span.exit, span.entry, tube.core_sigma[i], true));
      spans.push_back(span);
    }

    params = merge_parameters(std::move(special), std::move(params), 1e-12);

    // Classify tracked points and collect the strands of every ball.
    std::vector<Tracked> track;
    track.reserve(params.size());
    for (auto& span : spans) {
      const auto& s = d.subarcs[span.subarc];
      const Tube& tube = m.tubes[span.subarc];
      const auto& P = arc.curve.points;
      for (int side = 0; side < 2; ++side) {
        const std::size_t j = side == 0 ? s.start_point : s.end_point;
        const Point c = d.points[j].position;
        auto& bs = balls_[j];
        std::vector<Point> target, source;
        if (side == 0) {
          for (double u : params)
            if (u >= span.u0 && u <= span.exit) target.push_back(stage_one_[j](at(u), 1.0));
          for (std::size_t i = s.begin; i < s.end && distance(P[i], c) < r2; ++i) source.push_back(P[i]);
          source.push_back(tube.core.front());
        } else {
          for (auto it = params.rbegin(); it != params.rend(); ++it)
            if (*it >= span.entry && *it <= span.u1) target.push_back(stage_one_[j](at(*it), 1.0));
          for (std::size_t i = s.end; i > s.begin && distance(P[i], c) < r2; --i) source.push_back(P[i]);
          source.push_back(tube.core.back());
        }
        target.front() = c;
        source.front() = c;
        (side == 0 ? span.start_strand : span.end_strand) = bs.target_strands.size();
        bs.exit.push_back(target.back());
        bs.core_end.push_back(source.back());
        bs.tube.push_back(span.subarc);
        bs.leaf.push_back(side == 0 ? 0.0 : 1.0);
        bs.target_strands.push_back(std::move(target));
        bs.source_strands.push_back(std::move(source));
      }
    }

    double last_sigma = -1.0;
    std::size_t last_tube = d.subarcs.size();
    for (double u : params) {
      const auto it = std::find_if(spans.begin(), spans.end(), [&](const SubarcSpan& sp) { return u <= sp.u1; });
      const SubarcSpan& span = it == spans.end() ? spans.back() : *it;
      const auto& s = d.subarcs[span.subarc];
      Tracked p;
      p.origin = at(u);
      if (u <= span.exit || u >= span.entry) {
        const bool start = u <= span.exit;
        p.in_ball = true;
        p.ball = start ? s.start_point : s.end_point;
        p.strand = start ? span.start_strand : span.end_strand;
        p.staged = (u == span.u0 || u == span.u1) ? d.points[p.ball].position : stage_one_[p.ball](p.origin, 1.0);
        p.scale = distance(p.staged, d.points[p.ball].position) / r2;
      } else {
        p.in_ball = false;
        p.tube = span.subarc;
        const Tube& tube = m.tubes[span.subarc];
        p.sigma = tube.leaves.sigma_of(p.origin);
        p.core = tube.core_point(p.sigma);
        if (p.tube == last_tube && !(p.sigma > last_sigma))
          throw Error("target is not monotone across the leaves of a tube");
        last_tube = p.tube;
        last_sigma = p.sigma;
      }
      track.push_back(p);
    }
    tracked_.push_back(std::move(track));
  }

  for (std::size_t j = 0; j < balls_.size(); ++j) {
    auto& bs = balls_[j];
    const Point c = d.points[j].position;
    bs.target.emplace(c, r2, bs.target_strands);
    bs.source.emplace(c, r2, bs.source_strands);
  }
}

std::size_t FtcIsotopy::tracked_count() const {
  std::size_t n = 0;
  for (const auto& t : tracked_) n += t.size();
  return n;
}

Point FtcIsotopy::evaluate(const Tracked& p, double T) const {
  const double r4 = model_->chain.r4;
  const double s = 2.0 * T - 1.0;
  if (p.in_ball) {
    if (T <= 0.5) return stage_one_[p.ball](p.origin, 2.0 * T);
    const auto& bs = balls_[p.ball];
    const Point& c = model_->balls[p.ball].center;
    if (p.scale == 0.0) return c;
    if (s <= 1.0 / 3.0) return bs.target->strand_point(p.strand, p.staged, 3.0 * s);
    if (s <= 2.0 / 3.0) {
      const Tube& tube = model_->tubes[bs.tube[p.strand]];
      const Point& w0 = bs.exit[p.strand];
      const Point w = leaf_isotopy(tube.leaves, bs.leaf[p.strand], bs.core_end[p.strand], r4, w0, 3.0 * s - 1.0, w0);
      return c + (p.scale * model_->balls[p.ball].radius) * unit(w - c);
    }
    return bs.source->at_scale(p.strand, p.scale, 1.0 - (3.0 * s - 2.0));
  }
  if (T <= 0.5 || s <= 1.0 / 3.0) return p.origin;
  if (s <= 2.0 / 3.0) {
    const Tube& tube = model_->tubes[p.tube];
    return leaf_isotopy(tube.leaves, p.sigma, p.core, r4, p.origin, 3.0 * s - 1.0, p.origin);
  }
  return p.core;
}

std::vector<std::vector<Point>> FtcIsotopy::positions(double T) const {
  std::vector<std::vector<Point>> out(tracked_.size());
  for (std::size_t a = 0; a < tracked_.size(); ++a) {
    out[a].reserve(tracked_[a].size());
    for (const auto& p : tracked_[a]) out[a].push_back(evaluate(p, T));
  }
  return out;
}

// ---- frames ------------------------------------------------------------------

EmbeddedGraph IsotopyFrames::graph(std::size_t frame) const {
  EmbeddedGraph g;
  const auto& f = frames.at(frame);
  for (std::size_t a = 0; a < arc_ids.size(); ++a) {
    for (const auto& [id, p] : {std::pair{arc_ends[a].first, f.arcs[a].front()}, std::pair{arc_ends[a].second, f.arcs[a].back()}})
      if (!g.has_vertex(id)) g.add_vertex(id, p);
  }
  for (std::size_t a = 0; a < arc_ids.size(); ++a) {
    auto pts = f.arcs[a];
    pts.front() = g.vertex(arc_ends[a].first).position;
    pts.back() = g.vertex(arc_ends[a].second).position;
    g.add_arc(arc_ids[a], arc_ends[a].first, arc_ends[a].second, std::move(pts));
  }
  return g;
}

namespace {

std::vector<double> frame_times(int m) {
  if (m < 2) throw Error("need at least two frames");
  std::vector<double> t;
  for (int i = 0; i < m; ++i) t.push_back(static_cast<double>(i) / (m - 1));
  return t;
}

template <class Positions>
IsotopyFrames sample_frames(const EmbeddedGraph& g, double motion_bound, int m, Positions&& positions) {
  IsotopyFrames out;
  for (const auto& a : g.arcs()) {
    out.arc_ids.push_back(a.id);
    out.arc_ends.emplace_back(a.head, a.tail);
  }
  out.motion_bound = motion_bound;
  const auto times = frame_times(m);
  out.frames.resize(times.size());
  const double tol = 1e-9 * std::max(1.0, g.diameter());
  parallel_for(times.size(), [&](std::size_t i) {
    Frame& f = out.frames[i];
    f.time = times[i];
    f.arcs = positions(times[i]);
    const auto sep = min_separation(SegmentSoup::from_polylines(f.arcs, out.arc_ends));
    f.min_separation = sep.found ? sep.distance : std::numeric_limits<double>::infinity();
    f.embedded = !sep.found || sep.distance > tol;
  });
  const auto& first = out.frames.front().arcs;
  for (auto& f : out.frames) {
    for (std::size_t a = 0; a < f.arcs.size(); ++a)
      for (std::size_t i = 0; i < f.arcs[a].size(); ++i)
        f.max_displacement = std::max(f.max_displacement, distance(f.arcs[a][i], first[a][i]));
    out.max_displacement = std::max(out.max_displacement, f.max_displacement);
    out.all_embedded = out.all_embedded && f.embedded;
  }
  return out;
}

}  // namespace

IsotopyFrames assemble_frames(const EmbeddedGraph& g, const EmbeddedGraph& g2, const FtcConstruction& construction,
                              int m) {
  if (!construction.certificate.issued || construction.certificate.criterion != Criterion::Ftc)
    throw Error("frames need an issued FTC certificate");
  const FtcIsotopy iso(g, g2, construction);
  return sample_frames(g, construction.certificate.motion_bound, m, [&](double t) { return iso.positions(1.0 - t); });
}

IsotopyFrames assemble_thick_frames(const EmbeddedGraph& k, const EmbeddedGraph& k2, const IsotopyCertificate& cert,
                                    const Correspondence& c, int m) {
  if (!cert.issued || cert.criterion != Criterion::Thick) throw Error("frames need an issued thick certificate");
  struct ArcTrack {
    std::vector<Point> from, to;
  };
  std::vector<ArcTrack> tracks;
  for (const auto& a : k.arcs()) {
    const auto& ac = c.for_source(a.id);
    const PolylineArc T2 = paired_target_curve(k2, ac.pairing);
    const auto cum = cumulative_lengths(a.curve);
    const auto cum2 = cumulative_lengths(T2);
    std::vector<double> f;
    for (double x : cum) f.push_back(x / cum.back());
    std::vector<double> extra;
    for (const auto& [s, s2] : ac.map.breakpoints()) extra.push_back(s);
    for (double x : cum2) extra.push_back(ac.map.inverse(x / cum2.back()));
    f = merge_parameters(std::move(f), std::move(extra), 1e-12);
    ArcTrack t;
    for (double s : f) {
      t.from.push_back(point_at_length(a.curve, cum, s * cum.back()));
      t.to.push_back(point_at_length(T2, cum2, ac.map.forward(s) * cum2.back()));
    }
    tracks.push_back(std::move(t));
  }
  return sample_frames(k, cert.motion_bound, m, [&](double t) {
    std::vector<std::vector<Point>> out;
    for (const auto& tr : tracks) {
      std::vector<Point> pts;
      for (std::size_t i = 0; i < tr.from.size(); ++i) pts.push_back(t == 1.0 ? tr.to[i] : lerp(tr.from[i], tr.to[i], t));
      out.push_back(std::move(pts));
    }
    return out;
  });
}

}  // namespace ftc
