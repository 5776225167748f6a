#include <cmath>
#include <random>

#include "doctest.h"
#include "ftc/graph.hpp"
#include "ftc/shapes.hpp"

using namespace ftc;

namespace {

// Brute-force segment distance: dense grid on both parameters.
double sampled_segment_distance(const Point& p0, const Point& p1, const Point& q0, const Point& q1) {
  double best = INFINITY;
  const int n = 400;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      best = std::min(best, distance(lerp(p0, p1, double(i) / n), lerp(q0, q1, double(j) / n)));
  return best;
}

}  // namespace

TEST_SUITE("graph_core") {
  TEST_CASE("square loop has total curvature exactly 2 pi") {
    const auto g = shapes::square_loop();
    CHECK(total_curvature(g.arcs().front().curve) == doctest::Approx(2 * kPi).epsilon(1e-15));
    const auto turns = turning_angles(g.arcs().front().curve);
    for (double t : turns) CHECK(t == doctest::Approx(kPi / 2).epsilon(1e-15));
  }

  TEST_CASE("open arc curvature excludes its endpoints") {
    PolylineArc a;
    a.points = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    CHECK(total_curvature(a) == doctest::Approx(kPi / 2));
    const auto t = turning_angles(a);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 0.0);
  }

  TEST_CASE("regular polygon turns 2 pi in total") {
    for (int n : {3, 7, 64, 1024}) {
      const auto g = shapes::circle_loop(n);
      CHECK(total_curvature(g.arcs().front().curve) == doctest::Approx(2 * kPi).epsilon(1e-12));
    }
  }

  TEST_CASE("segment distance matches dense sampling") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 40; ++trial) {
      const Point p0{u(rng), u(rng), u(rng)}, p1{u(rng), u(rng), u(rng)};
      const Point q0{u(rng), u(rng), u(rng)}, q1{u(rng), u(rng), u(rng)};
      const double exact = segment_distance(p0, p1, q0, q1).distance;
      const double sampled = sampled_segment_distance(p0, p1, q0, q1);
      CHECK(exact <= sampled + 1e-12);
      CHECK(exact >= sampled - 0.01);
    }
  }

  TEST_CASE("parallel and degenerate segments") {
    CHECK(segment_distance({0, 0, 0}, {1, 0, 0}, {0.5, 1, 0}, {2, 1, 0}).distance == doctest::Approx(1.0));
    CHECK(segment_distance({0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {1, 0, 0}).distance == doctest::Approx(1.0));
    CHECK(segment_distance({0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}).distance == doctest::Approx(1.0));
  }

  TEST_CASE("validation rejects malformed arcs") {
    EmbeddedGraph g;
    g.add_vertex(0, {0, 0, 0});
    g.add_vertex(1, {1, 0, 0});
    g.add_arc(0, 0, 1, {{0, 0, 0}});
    CHECK_THROWS_AS(g.validate(), Error);
    EmbeddedGraph h;
    h.add_vertex(0, {0, 0, 0});
    h.add_vertex(1, {1, 0, 0});
    h.add_arc(0, 0, 1, {{0, 0, 0}, {0.5, 0, 0}, {0.5, 0, 0}, {1, 0, 0}});
    CHECK_THROWS_AS(h.validate(), Error);
  }

  TEST_CASE("embedding check detects a self-crossing") {
    auto g = make_loop_graph({{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}});
    CHECK_THROWS_AS(g.validate(true), Error);
    CHECK_NOTHROW(shapes::trefoil_loop(120).validate(true));
    CHECK_NOTHROW(shapes::hopf_link(64).validate(true));
    CHECK_NOTHROW(shapes::theta_graph(16, kPi / 20).validate(true));
  }

  TEST_CASE("min separation agrees with all pairs") {
    const auto g = shapes::trefoil_loop(90);
    const auto soup = SegmentSoup::from_graph(g);
    const auto sep = min_separation(soup);
    double brute = INFINITY;
    const auto& s = soup.segments;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (s[i].key_a == s[j].key_a || s[i].key_a == s[j].key_b || s[i].key_b == s[j].key_a ||
            s[i].key_b == s[j].key_b)
          continue;
        brute = std::min(brute, segment_distance(s[i].a, s[i].b, s[j].a, s[j].b).distance);
      }
    CHECK(sep.found);
    CHECK(sep.distance == doctest::Approx(brute).epsilon(1e-12));
  }

  TEST_CASE("curvature is invariant under rigid motions") {
    const auto g = shapes::trefoil_loop(200);
    const double base = total_curvature(g.arcs().front().curve);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto m = shapes::RigidMotion::random(seed);
      const auto h = g.transformed(m);
      CHECK(total_curvature(h.arcs().front().curve) == doctest::Approx(base).epsilon(1e-9));
    }
  }

  TEST_CASE("corner set reports only sharp turns") {
    const auto corners = corner_set(shapes::square_loop(), kPi / 8);
    CHECK(corners.size() == 4);
    CHECK(corner_set(shapes::circle_loop(64), kPi / 8).empty());
  }

  TEST_CASE("point at length walks the polyline") {
    const auto g = shapes::square_loop(2.0);
    const auto& arc = g.arcs().front().curve;
    const auto cum = cumulative_lengths(arc);
    CHECK(cum.back() == doctest::Approx(8.0));
    const Point p = point_at_length(arc, cum, 3.0);
    CHECK(p.x == doctest::Approx(2.0));
    CHECK(p.y == doctest::Approx(1.0));
  }
}
