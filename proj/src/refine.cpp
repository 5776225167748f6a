#include "ftc/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ftc {

EmbeddedGraph inscribe_polygon(const EmbeddedGraph& g, double h) {
  if (!(h > 0.0)) throw Error("inscribe spacing must be positive");
  EmbeddedGraph out;
  for (const auto& v : g.vertices()) out.add_vertex(v.id, v.position);
  for (const auto& a : g.arcs()) {
    const auto& c = a.curve;
    const auto cum = cumulative_lengths(c);
    const auto turns = turning_angles(c);
    std::vector<std::size_t> kept{0};
    for (std::size_t i = 1; i + 1 < c.points.size(); ++i)
      if (turns[i] >= kPi / 8 - kAngleTolerance) kept.push_back(i);
    kept.push_back(c.points.size() - 1);

    std::vector<Point> pts{c.points.front()};
    for (std::size_t k = 0; k + 1 < kept.size(); ++k) {
      const double s0 = cum[kept[k]], s1 = cum[kept[k + 1]];
      const int pieces = std::max(1, static_cast<int>(std::lround((s1 - s0) / h)));
      for (int j = 1; j < pieces; ++j) pts.push_back(point_at_length(c, cum, s0 + (s1 - s0) * j / pieces));
      pts.push_back(c.points[kept[k + 1]]);
    }
    out.add_arc(a.id, a.head, a.tail, std::move(pts));
  }
  return out;
}

PolylineArc EqualSpacing::polygon() const {
  PolylineArc p;
  p.points = points;
  p.points.push_back(points.front());
  p.closed = true;
  return p;
}

EqualSpacing equal_arclength_points(const PolylineArc& k, double tau) {
  if (!k.closed) throw Error("equal spacing needs a closed curve");
  if (!(tau > 0.0)) throw Error("tau must be positive");
  const auto cum = cumulative_lengths(k);
  const double L = cum.back();
  // r = L/n lies in (tau/50, tau/40) exactly when 40 L/tau < n < 50 L/tau.
  const double lo = 40.0 * L / tau, hi = 50.0 * L / tau;
  const long n_min = static_cast<long>(std::floor(lo)) + 1;
  const long n_max = static_cast<long>(std::ceil(hi)) - 1;
  if (n_max < std::max(1L, n_min)) throw Error("no spacing in (tau/50, tau/40) divides this length");
  const long n = std::clamp(std::lround(45.0 * L / tau), std::max(1L, n_min), n_max);
  EqualSpacing out;
  out.spacing = L / static_cast<double>(n);
  for (long j = 0; j < n; ++j) out.points.push_back(point_at_length(k, cum, L * static_cast<double>(j) / n));
  return out;
}

bool RoundingReport::sketch_bound_holds() const { return d <= (1.0 / std::cos(phi) - 1.0) * spacing / 2.0; }

Rounded fillet_round(const PolylineArc& polygon, double rho) {
  if (!polygon.closed) throw Error("fillet rounding needs a closed polygon");
  if (!(rho > 0.0)) throw Error("fillet radius must be positive");
  polygon.validate();
  const auto& P = polygon.points;
  const std::size_t n = P.size() - 1;
  if (n < 3) throw Error("fillet rounding needs at least three vertices");

  std::vector<Vec3> dir(n);
  std::vector<double> len(n);
  for (std::size_t i = 0; i < n; ++i) {
    len[i] = norm(P[i + 1] - P[i]);
    dir[i] = (P[i + 1] - P[i]) / len[i];
  }
  std::vector<double> turn(n), tangent(n);
  for (std::size_t i = 0; i < n; ++i) {
    turn[i] = angle_between(dir[(i + n - 1) % n], dir[i]);
    tangent[i] = turn[i] > 1e-12 ? rho * std::tan(turn[i] / 2.0) : 0.0;
    const double room = 0.5 * std::min(len[(i + n - 1) % n], len[i]);
    if (!(tangent[i] < room))
      throw Error("fillet radius infeasible at corner " + std::to_string(i) + ": tangent length " +
                  std::to_string(tangent[i]) + " exceeds " + std::to_string(room));
  }

  Rounded out;
  RoundingReport& rep = out.report;
  rep.fillet_radius = rho;
  rep.spacing = *std::min_element(len.begin(), len.end());
  rep.polygon_curvature = total_curvature(polygon);

  // Chord error rho (1 - cos(step/2)) < 1e-6 rho, and at most 0.05 rad.
  const double max_step = std::min(0.05, 2.0 * std::acos(1.0 - 1e-6));
  auto& pts = out.curve.points;
  for (std::size_t i = 0; i < n; ++i) {
    if (tangent[i] == 0.0) {
      pts.push_back(P[i]);
      continue;
    }
    const Vec3& din = dir[(i + n - 1) % n];
    const Vec3& dout = dir[i];
    const Point A = P[i] - tangent[i] * din;
    const Vec3 toward = (dout - din) / norm(dout - din);
    const Point C = P[i] + (rho / std::cos(turn[i] / 2.0)) * toward;
    const Vec3 axis = cross(din, dout) / norm(cross(din, dout));
    const int steps = std::max(2, static_cast<int>(std::ceil(turn[i] / max_step)));
    const std::size_t first = pts.size();
    for (int j = 0; j <= steps; ++j) pts.push_back(C + rotate(A - C, axis, turn[i] * j / steps));
    for (int j = 0; j < steps; ++j) {
      const Vec3 chord = pts[first + j + 1] - pts[first + j];
      rep.phi = std::max(rep.phi, angle_between(chord, 2 * j + 1 < steps ? din : dout));
    }
    rep.max_corner_cut = std::max(rep.max_corner_cut, rho * (1.0 / std::cos(turn[i] / 2.0) - 1.0));

    // Closeness under the radial correspondence: each arc point is paired
    // with the point of A -> P[i] -> B on its ray from the centre.
    for (int j = 0; j <= 2 * steps; ++j) {
      const double a = turn[i] * j / (2.0 * steps);
      const Vec3 ray = rotate(A - C, axis, a) / rho;
      const bool first_half = 2 * j <= 2 * steps;
      const Point base = first_half ? A : P[i];
      const Vec3& e = first_half ? din : dout;
      // Intersect C + s ray with the line base + u e.
      const Vec3 w = base - C;
      const double s = (dot(w, ray) - dot(w, e) * dot(ray, e)) / (1.0 - dot(ray, e) * dot(ray, e));
      rep.d = std::max(rep.d, s - rho);
    }
  }
  pts.push_back(pts.front());
  out.curve.closed = true;
  out.curve.validate();

  rep.output_curvature = total_curvature(out.curve);
  rep.min_radius = std::numeric_limits<double>::infinity();
  const std::size_t m = pts.size() - 1;
  for (std::size_t i = 0; i < m; ++i)
    rep.min_radius = std::min(rep.min_radius, circumradius(pts[(i + m - 1) % m], pts[i], pts[(i + 1) % m]));
  return out;
}

TubeCheck dcsd_tube_check(const PolylineArc& l, double diameter) {
  const ThicknessReport t = discrete_thickness(l);
  TubeCheck c;
  c.thickness = t.tau_hat;
  c.pass = t.tau_hat >= diameter;
  c.mechanism = t.mechanism;
  c.triple_center = t.triple_center;
  c.pair = t.pair;
  return c;
}

}  // namespace ftc
