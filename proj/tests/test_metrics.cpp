#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "ftc/metrics.hpp"
#include "ftc/shapes.hpp"

using namespace ftc;

namespace {

EmbeddedGraph segment_graph(const Point& a, const Point& b) {
  EmbeddedGraph g;
  g.add_vertex(0, a);
  g.add_vertex(1, b);
  g.add_arc(0, 0, 1, {a, b});
  return g;
}

// Closeness sampled on a dense parameter grid of one arc pair.
std::pair<double, double> sampled_closeness(const PolylineArc& a, const PolylineArc& b, const ParameterMap& map) {
  const auto ca = cumulative_lengths(a);
  const auto cb = cumulative_lengths(b);
  double delta = 0.0, theta = 0.0;
  const int n = 20000;
  const double h = 1e-7;
  for (int i = 0; i <= n; ++i) {
    const double s = double(i) / n;
    const Point p = point_at_length(a, ca, s * ca.back());
    const Point q = point_at_length(b, cb, map.forward(s) * cb.back());
    delta = std::max(delta, distance(p, q));
    if (i > 0 && i < n) {
      const Vec3 ta = point_at_length(a, ca, (s + h) * ca.back()) - point_at_length(a, ca, (s - h) * ca.back());
      const Vec3 tb = point_at_length(b, cb, map.forward(s + h) * cb.back()) -
                      point_at_length(b, cb, map.forward(s - h) * cb.back());
      theta = std::max(theta, angle_between(ta, tb));
    }
  }
  return {delta, theta};
}

// Exhaustive discrete Frechet distance by recursion over all couplings.
double exhaustive_frechet(const std::vector<Point>& a, const std::vector<Point>& b, std::size_t i, std::size_t j) {
  const double here = distance(a[i], b[j]);
  if (i + 1 == a.size() && j + 1 == b.size()) return here;
  double best = INFINITY;
  if (i + 1 < a.size()) best = std::min(best, exhaustive_frechet(a, b, i + 1, j));
  if (j + 1 < b.size()) best = std::min(best, exhaustive_frechet(a, b, i, j + 1));
  if (i + 1 < a.size() && j + 1 < b.size()) best = std::min(best, exhaustive_frechet(a, b, i + 1, j + 1));
  return std::max(here, best);
}

double brute_min_rad(const PolylineArc& loop) {
  const auto& P = loop.points;
  const std::size_t n = P.size() - 1;
  double r = INFINITY;
  for (std::size_t i = 0; i < n; ++i) r = std::min(r, circumradius(P[(i + n - 1) % n], P[i], P[(i + 1) % n]));
  return r;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("identical graphs are (0,0)-close") {
    const auto g = shapes::trefoil_loop(150);
    const auto r = measure_closeness(g, g, default_correspondence(g, g));
    CHECK(r.delta == 0.0);
    CHECK(r.theta == 0.0);
  }

  TEST_CASE("translation gives (|v|, 0)") {
    const auto g = shapes::circle_loop(64);
    const Vec3 v{0.03, -0.04, 0.0};
    const auto h = g.transformed([&](const Point& p) { return p + v; });
    const auto r = measure_closeness(g, h, default_correspondence(g, h));
    CHECK(r.delta == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(r.theta == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("rotated segment: theta = phi, delta = sin(phi/2) scaled") {
    const double phi = 0.3;
    const Point a{-0.5, 0, 0}, b{0.5, 0, 0};
    const auto rot = [&](const Point& p) { return rotate(p, {0, 0, 1}, phi); };
    const auto g = segment_graph(a, b);
    const auto h = segment_graph(rot(a), rot(b));
    const auto c = default_correspondence(g, h);
    const auto r = measure_closeness(g, h, c);
    CHECK(r.theta == doctest::Approx(phi).epsilon(1e-12));
    // Endpoint displacement of a half-unit lever: 2 * 0.5 * sin(phi/2).
    CHECK(r.delta == doctest::Approx(std::sin(phi / 2)).epsilon(1e-12));
    const auto [sd, st] = sampled_closeness(g.arcs()[0].curve, h.arcs()[0].curve, c.arcs[0].map);
    CHECK(sd == doctest::Approx(r.delta).epsilon(1e-9));
    CHECK(st == doctest::Approx(r.theta).epsilon(1e-6));
  }

  TEST_CASE("exact closeness dominates dense sampling") {
    const auto g = shapes::trefoil_loop(60);
    const auto h = shapes::perturbed(g, 0.05, 11);
    const auto c = default_correspondence(g, h);
    const auto r = measure_closeness(g, h, c);
    const auto [sd, st] = sampled_closeness(g.arcs()[0].curve, h.arcs()[0].curve, c.arcs[0].map);
    CHECK(r.delta >= sd - 1e-12);
    CHECK(r.delta <= sd + 1e-3);
    CHECK(r.theta >= st - 1e-6);
  }

  TEST_CASE("closeness is symmetric under the inverse correspondence") {
    const auto g = shapes::figure_eight_loop(80);
    const auto h = shapes::perturbed(g, 0.02, 3);
    const auto c = default_correspondence(g, h);
    const auto a = measure_closeness(g, h, c);
    const auto b = measure_closeness(h, g, c.inverse());
    CHECK(a.delta == doctest::Approx(b.delta).epsilon(1e-12));
    CHECK(a.theta == doctest::Approx(b.theta).epsilon(1e-9));
  }

  TEST_CASE("non-isomorphic pairing is rejected") {
    CHECK_THROWS_AS(default_correspondence(shapes::circle_loop(8), shapes::hopf_link(8)), Error);
  }

  TEST_CASE("refinement never increases delta and fixes optimal maps") {
    const auto g = shapes::circle_loop(40);
    const auto same = refine_correspondence(g, g, default_correspondence(g, g));
    CHECK(measure_closeness(g, g, same).delta == doctest::Approx(0.0).epsilon(1e-12));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto h = shapes::perturbed(g, 0.05, seed);
      const auto c = default_correspondence(g, h);
      const auto r = refine_correspondence(g, h, c);
      CHECK(measure_closeness(g, h, r).delta <= measure_closeness(g, h, c).delta + 1e-15);
    }
  }

  TEST_CASE("refinement beats index pairing on warped sampling") {
    // Same quarter circle: uniform samples vs samples crowded toward the start.
    std::vector<Point> a, b;
    for (int i = 0; i <= 5; ++i) {
      const double t = kPi / 2 * i / 5;
      const double w = kPi / 2 * std::pow(i / 5.0, 2.0);
      a.push_back({std::cos(t), std::sin(t), 0});
      b.push_back({std::cos(w), std::sin(w), 0});
    }
    EmbeddedGraph g, h;
    for (auto* x : {&g, &h}) {
      x->add_vertex(0, {1, 0, 0});
      x->add_vertex(1, {std::cos(kPi / 2), 1, 0});
    }
    g.add_arc(0, 0, 1, a);
    h.add_arc(0, 0, 1, b);
    const auto naive = index_correspondence(g, h);
    const double naive_delta = measure_closeness(g, h, naive).delta;
    const auto refined = refine_correspondence(g, h, naive);
    const double refined_delta = measure_closeness(g, h, refined).delta;
    CHECK(refined_delta < naive_delta);
    // Lower bound for any correspondence: directed Hausdorff distance.
    double hausdorff = 0.0;
    for (const auto& p : a) hausdorff = std::max(hausdorff, point_arc_distance(p, h.arcs()[0].curve));
    CHECK(refined_delta >= hausdorff - 1e-12);
    CHECK(refined_delta <= exhaustive_frechet(a, b, 0, 0) + 1e-9);
  }

  TEST_CASE("64-gon thickness is 2") {
    const auto g = shapes::circle_loop(64);
    const auto& loop = g.arcs()[0].curve;
    const auto r = discrete_thickness(loop);
    CHECK(r.min_rad == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.min_rad == doctest::Approx(brute_min_rad(loop)).epsilon(1e-15));
    CHECK(r.dcsd == doctest::Approx(2.0).epsilon(0.01));
    CHECK(r.tau_hat == doctest::Approx(2.0).epsilon(0.01));
    const auto big = shapes::circle_loop(64, 3.0);
    CHECK(discrete_thickness(big.arcs()[0].curve).tau_hat == doctest::Approx(3 * r.tau_hat).epsilon(1e-12));
  }

  TEST_CASE("stadium thickness is the width") {
    const auto g = shapes::stadium_loop(10.0, 1.0, 32);
    const auto r = discrete_thickness(g.arcs()[0].curve);
    CHECK(r.dcsd == doctest::Approx(1.0).epsilon(0.01));
    CHECK(r.tau_hat == doctest::Approx(1.0).epsilon(0.01));
  }

  TEST_CASE("convex curves are curvature controlled") {
    const auto g = shapes::sampled_loop([](double t) { return Point{2 * std::cos(t), std::sin(t), 0}; }, 200);
    const auto r = discrete_thickness(g.arcs()[0].curve);
    CHECK(r.tau_hat == doctest::Approx(2 * r.min_rad).epsilon(1e-12));
    CHECK(r.mechanism == ThicknessMechanism::Curvature);
  }

  TEST_CASE("thickness is invariant under rigid motions") {
    const auto g = shapes::trefoil_loop(150);
    const double base = discrete_thickness(g.arcs()[0].curve).tau_hat;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto h = g.transformed(shapes::RigidMotion::random(seed));
      CHECK(discrete_thickness(h.arcs()[0].curve).tau_hat == doctest::Approx(base).epsilon(1e-9));
    }
  }

  TEST_CASE("distortion") {
    PolylineArc straight;
    straight.points = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    CHECK(distortion(straight) == doctest::Approx(1.0));
    PolylineArc semi;
    for (int i = 0; i <= 200; ++i) semi.points.push_back({std::cos(kPi * i / 200), std::sin(kPi * i / 200), 0});
    CHECK(distortion(semi) == doctest::Approx(kPi / 2).epsilon(0.01));
    CHECK(distortion(shapes::circle_loop(256).arcs()[0].curve) == doctest::Approx(kPi / 2).epsilon(0.01));
    CHECK(distortion(shapes::trefoil_loop(100).arcs()[0].curve) > 1.0);
  }

  TEST_CASE("chord-angle modulus") {
    PolylineArc straight;
    straight.points = {{0, 0, 0}, {1, 0, 0}, {3, 0, 0}};
    CHECK(chord_angle_modulus(straight, kPi / 8) == doctest::Approx(3.0));
    const auto cg = shapes::circle_loop(256);
    const auto& circle = cg.arcs()[0].curve;
    CHECK(chord_angle_modulus(circle, kPi / 8) == doctest::Approx(kPi / 4).epsilon(0.1));
    const auto sg = shapes::square_loop();
    const auto& square = sg.arcs()[0].curve;
    CHECK(chord_angle_modulus(square, kPi / 8) < 1.0);
  }
}
