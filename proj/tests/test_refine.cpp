#include <cmath>
#include <random>

#include "doctest.h"
#include "ftc/certify.hpp"
#include "ftc/refine.hpp"
#include "ftc/shapes.hpp"

using namespace ftc;

TEST_SUITE("refine") {
  TEST_CASE("inscribing a straight arc keeps its endpoints") {
    EmbeddedGraph g;
    g.add_vertex(0, {0, 0, 0});
    g.add_vertex(1, {3, 0, 0});
    g.add_arc(0, 0, 1, {{0, 0, 0}, {3, 0, 0}});
    for (double h : {2.5, 3.0, 10.0}) CHECK(inscribe_polygon(g, h).arcs()[0].curve.points.size() == 2);
    CHECK(inscribe_polygon(g, 1.0).arcs()[0].curve.points.size() == 4);
  }

  TEST_CASE("inscribed 16-gon of the 1024-gon") {
    const auto g = shapes::circle_loop(1024);
    const double L = arc_length(g.arcs()[0].curve);
    const auto p = inscribe_polygon(g, L / 16);
    const auto& pts = p.arcs()[0].curve.points;
    CHECK(pts.size() == 17);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(distance(pts[i], g.arcs()[0].curve.points[64 * i]) < 1e-12);
    const auto c = measure_closeness(g, p, default_correspondence(g, p));
    CHECK(c.theta <= kPi / 16);
    CHECK(c.delta <= L / 16);
  }

  TEST_CASE("square keeps its corners") {
    const auto g = shapes::square_loop(3.0);
    const auto p = inscribe_polygon(g, 1.0);
    const auto& pts = p.arcs()[0].curve.points;
    CHECK(pts.size() == 13);
    for (const auto& corner : g.arcs()[0].curve.points) {
      bool found = false;
      for (const auto& q : pts) found = found || q == corner;
      CHECK(found);
    }
  }

  TEST_CASE("sharp corners survive coarse spacing") {
    std::vector<Point> pts;
    for (int i = 0; i <= 20; ++i) pts.push_back({0.1 * i, 0, 0});
    for (int i = 1; i <= 20; ++i) pts.push_back({2.0 - 0.05 * i, 0.08 * i, 0});
    EmbeddedGraph g;
    g.add_vertex(0, pts.front());
    g.add_vertex(1, pts.back());
    g.add_arc(0, 0, 1, pts);
    const auto p = inscribe_polygon(g, 5.0);
    const auto& out = p.arcs()[0].curve.points;
    REQUIRE(out.size() == 3);
    CHECK(out[1] == Point{2, 0, 0});
  }

  TEST_CASE("equal arclength spacing") {
    const auto sq = shapes::square_loop(11.25).arcs()[0].curve;
    const auto e = equal_arclength_points(sq, 45.0);
    CHECK(e.points.size() == 45);
    CHECK(e.spacing == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(equal_arclength_points(sq, 50.0 * 45.0 * 1.01), Error);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> tau(0.01, 100.0);
    const auto circle = shapes::circle_loop(64).arcs()[0].curve;
    for (int i = 0; i < 200; ++i) {
      const double t = tau(rng);
      try {
        const auto r = equal_arclength_points(circle, t);
        CHECK(r.spacing > t / 50);
        CHECK(r.spacing < t / 40);
        const auto poly = r.polygon();
        CHECK(arc_length(poly) <= arc_length(circle) + 1e-12);
      } catch (const Error&) {
        // Refused only when no integer count lies strictly inside the window.
        const double L = arc_length(circle);
        CHECK(std::floor(40 * L / t) + 1 >= 50 * L / t);
      }
    }
  }

  TEST_CASE("filleted square matches the closed form") {
    const auto sq = shapes::square_loop(10.0).arcs()[0].curve;
    const auto r = fillet_round(sq, 1.0);
    CHECK(r.report.d == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
    CHECK(r.report.max_corner_cut == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
    CHECK(r.report.min_radius == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.report.min_radius >= 1.0 * (1 - 1e-9));
    CHECK(r.report.phi < kPi / 4);
    CHECK(r.report.output_curvature == doctest::Approx(2 * kPi).epsilon(1e-6));
    CHECK(r.report.output_curvature == doctest::Approx(r.report.polygon_curvature).epsilon(1e-6));
    // No output point is farther from the square than the corner cut.
    for (const auto& p : r.curve.points) CHECK(point_arc_distance(p, sq) <= std::sqrt(2.0) - 1.0 + 1e-12);
  }

  TEST_CASE("infeasible fillet radius names the corner") {
    const auto sq = shapes::square_loop(10.0).arcs()[0].curve;
    try {
      fillet_round(sq, 6.0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("corner 0") != std::string::npos);
    }
  }

  TEST_CASE("straight-through vertices are left alone") {
    const auto sq = make_loop_graph({{0, 0, 0}, {5, 0, 0}, {10, 0, 0}, {10, 10, 0}, {0, 10, 0}}).arcs()[0].curve;
    const auto r = fillet_round(sq, 1.0);
    int hits = 0;
    for (const auto& p : r.curve.points) hits += p == Point{5, 0, 0};
    CHECK(hits == 1);
  }

  TEST_CASE("rounding pipeline on the circle") {
    const auto circle = shapes::circle_loop(256).arcs()[0].curve;
    const double tau = discrete_thickness(circle).tau_hat;
    const auto e = equal_arclength_points(circle, tau);
    CHECK(e.spacing > tau / 50);
    CHECK(e.spacing < tau / 40);
    const double r = e.spacing;
    const auto rounded = fillet_round(e.polygon(), 5 * r);
    CHECK(rounded.report.min_radius >= 5 * r * (1 - 1e-6));
    CHECK(rounded.report.d <= rounded.report.max_corner_cut + 1e-15);
    CHECK(rounded.report.output_curvature == doctest::Approx(rounded.report.polygon_curvature).epsilon(1e-6));
    CHECK(dcsd_tube_check(rounded.curve, tau / 5).pass);
    // With fillet radius 5r the measured distance exceeds the sketch's
    // (sec phi - 1) r / 2 by roughly a factor of ten; it is reported only.
    CHECK_FALSE(rounded.report.sketch_bound_holds());
  }

  TEST_CASE("tube check witnesses") {
    const auto circle = shapes::circle_loop(256).arcs()[0].curve;
    CHECK(dcsd_tube_check(circle, 0.4).pass);
    const auto fail = dcsd_tube_check(circle, 2.5);
    CHECK_FALSE(fail.pass);
    CHECK(fail.mechanism == ThicknessMechanism::Curvature);
    CHECK(fail.thickness == doctest::Approx(2.0).epsilon(1e-3));

    // Rounded dumbbell: fillets of radius 0.8 around a neck one unit wide.
    const auto dumbbell = make_loop_graph({{-6, -2, 0}, {-4, -2, 0}, {-3, -0.5, 0}, {3, -0.5, 0}, {4, -2, 0}, {6, -2, 0},
                                           {6, 2, 0}, {4, 2, 0}, {3, 0.5, 0}, {-3, 0.5, 0}, {-4, 2, 0}, {-6, 2, 0}})
                              .arcs()[0]
                              .curve;
    const auto rounded = fillet_round(dumbbell, 0.8).curve;
    const auto s = dcsd_tube_check(rounded, 1.5);
    CHECK_FALSE(s.pass);
    CHECK(s.mechanism == ThicknessMechanism::SelfDistance);
    CHECK(s.thickness == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(rounded.points[s.pair.first].y - rounded.points[s.pair.second].y) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dcsd_tube_check(rounded, 0.9).pass);
  }
}
