#include <cmath>
#include <random>

#include "doctest.h"
#include "ftc/certify.hpp"
#include "ftc/shapes.hpp"

using namespace ftc;

TEST_SUITE("certify") {
  TEST_CASE("theta formula") {
    CHECK(theta_of(1.0 / 8.0, 1.0) == doctest::Approx(kPi / 2 - 2 * std::asin(0.25)).epsilon(1e-15));
    CHECK(theta_of(1.0 / 8.0, 1.0) == doctest::Approx(1.0654).epsilon(1e-4));
    CHECK(theta_of(0.25 * (1 - 1e-12), 1.0) == doctest::Approx(kPi / 6).epsilon(1e-9));
    CHECK(theta_of(1e-15, 1.0) == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK_THROWS_AS(theta_of(0.25, 1.0), Error);
    double prev = kPi / 2;
    for (int i = 1; i < 100; ++i) {
      const double t = theta_of(0.25 * i / 100, 1.0);
      CHECK(t < prev);
      prev = t;
    }
  }

  TEST_CASE("square decomposes at its corners") {
    const auto g = shapes::square_loop();
    const auto d = corner_decomposition(g);
    CHECK(d.points.size() == 4);
    CHECK(d.subarcs.size() == 4);
    for (const auto& s : d.subarcs) CHECK(s.curvature == 0.0);
  }

  TEST_CASE("64-gon decomposes into pieces under pi/8") {
    const auto g = shapes::circle_loop(64);
    const auto d = corner_decomposition(g);
    CHECK(d.subarcs.size() >= 16);
    double total = 0.0;
    for (const auto& s : d.subarcs) {
      CHECK(s.curvature < kPi / 8);
      total += s.curvature;
    }
    // Interior turning plus the turning at the cut points recovers 2 pi.
    CHECK(total + d.points.size() * (2 * kPi / 64) == doctest::Approx(2 * kPi).epsilon(1e-12));
  }

  TEST_CASE("smooth theta graph keeps only its vertices") {
    const auto g = shapes::theta_graph(24, kPi / 20);
    const auto d = corner_decomposition(g);
    CHECK(d.points.size() == 2);
    CHECK(d.subarcs.size() == 3);
  }

  TEST_CASE("radii chain for parallel strands") {
    const auto g = shapes::parallel_strands(1.0, 4.0);
    const auto d = corner_decomposition(g);
    const auto c = ftc_radii(g, d, 10.0);
    CHECK(c.r1 == 1.0);
    CHECK(c.r2 == 0.5);
    CHECK(c.consistent());
    const auto c2 = ftc_radii(g, d, 0.4);
    CHECK(c2.r2 == 0.2);
    CHECK(c2.consistent());
    CHECK(c2.r3 <= 2 * c2.r2);
  }

  TEST_CASE("leaf family geometry") {
    const LeafFamily f({0, 0, 0}, {3, 0, 0}, 0.5);
    // sigma = 0 and 1 are the ball boundaries, 1/2 the bisecting plane.
    CHECK(f.side(0.0, {0.5, 0, 0}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(f.side(1.0, {2.5, 0, 0}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(f.side(0.5, {1.5, 7, 2}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(f.side(0.0, {0, 0.5, 0}) == doctest::Approx(0.0).epsilon(1e-15));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 200; ++i) {
      const Point z{1.5 + 1.4 * u(rng), 2 * u(rng), 2 * u(rng)};
      if (distance(z, {0, 0, 0}) <= 0.5 || distance(z, {3, 0, 0}) <= 0.5) continue;
      const double s = f.sigma_of(z);
      CHECK(std::abs(f.side(s, z)) < 1e-9);
      // Leaves are nested: side is monotone in sigma.
      CHECK(f.side(std::max(0.0, s - 0.01), z) > 0.0);
      CHECK(f.side(std::min(1.0, s + 0.01), z) < 0.0);
      const Point q = f.project(0.3, z);
      CHECK(std::abs(f.side(0.3, q)) < 1e-12);
      const Vec3 t = any_orthogonal(f.normal(s, z));
      const Point w = f.disk_point(s, z, t, 0.1);
      CHECK(std::abs(f.side(s, w)) < 1e-10);
      CHECK(distance(w, z) == doctest::Approx(0.1).epsilon(1e-9));
    }
  }

  TEST_CASE("straight strand is normal to every leaf") {
    const auto g = shapes::parallel_strands(1.0, 4.0);
    auto d = corner_decomposition(g);
    const auto c = ftc_radii(g, d, 10.0);
    const auto m = build_neighborhood(g, d, c);
    CHECK(m.max_strand_normal_angle < 1e-12);
    CHECK(m.tubes.size() == 2);
  }

  TEST_CASE("neighborhood checks on curved fixtures") {
    for (const auto& g : {shapes::circle_loop(64), shapes::trefoil_loop(200), shapes::hopf_link(64),
                          shapes::theta_graph(24, kPi / 20), shapes::square_loop()}) {
      const auto [d, m] = build_ftc_model(g, 1.0);
      CHECK(m.chain.consistent());
      CHECK(m.max_strand_normal_angle <= kPi / 4);
      CHECK(m.max_disk_drift <= 2 * std::asin(1.0 / 6) + 1e-12);
      for (const auto& s : d.subarcs) CHECK(s.curvature < kPi / 8);
    }
  }

  TEST_CASE("thick criterion on a translated circle") {
    const auto k = shapes::circle_loop(256);
    const auto near = k.transformed([](const Point& p) { return p + Vec3{0.05, 0, 0}; });
    const auto c = certify_thick(k, near, default_correspondence(k, near));
    CHECK(c.issued);
    CHECK(c.motion_bound == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(c.tau == doctest::Approx(2.0).epsilon(0.01));

    const auto far = k.transformed([](const Point& p) { return p + Vec3{0.6, 0, 0}; });
    const auto r = certify_thick(k, far, default_correspondence(k, far), 2.0);
    CHECK_FALSE(r.issued);
    CHECK(r.reason == Refusal::DeltaTooLarge);
  }

  TEST_CASE("thick criterion refuses a bent segment") {
    const auto k = shapes::circle_loop(256);
    auto bent = k;
    auto& pts = bent.arcs()[0].curve.points;
    // Fold one segment back on itself: its direction turns by almost pi.
    pts[10] = pts[9] - 0.5 * (pts[10] - pts[9]) + 0.01 * pts[9];
    const auto r = certify_thick(k, bent, default_correspondence(k, bent));
    CHECK_FALSE(r.issued);
    CHECK(r.reason == Refusal::ThetaTooLarge);
  }

  TEST_CASE("ftc certificate for a small perturbation") {
    const auto g = shapes::trefoil_loop(200);
    const auto [d, m] = build_ftc_model(g, 0.1);
    const auto h = shapes::perturbed(g, m.chain.delta * 0.4, 1);
    const auto cert = certify_ftc(g, h, 0.1);
    CHECK(cert.issued);
    CHECK(cert.motion_bound == 0.1);
    CHECK(cert.max_leaf_distance < 2 * cert.chain.delta);
    CHECK(cert.max_leaf_angle <= kPi / 4);

    const auto shifted = g.transformed([&](const Point& p) { return p + Vec3{2 * m.chain.delta, 0, 0}; });
    const auto r = certify_ftc(g, shifted, 0.1);
    CHECK_FALSE(r.issued);
    CHECK(r.reason == Refusal::DeltaTooLarge);
  }

  TEST_CASE("ftc refuses an inserted local knot") {
    const auto g = shapes::trefoil_loop(200);
    const auto [d, m] = build_ftc_model(g, 0.1);
    const auto h = shapes::with_local_trefoil(g, 17, m.chain.delta / 20);
    CHECK_NOTHROW(h.validate(true));
    const auto r = certify_ftc(g, h, 0.1);
    CHECK_FALSE(r.issued);
    CHECK(r.reason == Refusal::ThetaTooLarge);
  }

  TEST_CASE("ftc refuses when adjacent end balls touch") {
    // On a regular polygon r1 is the chord between consecutive cut points,
    // so a large epsilon makes the balls of r1/2 tangent.
    const auto g = shapes::circle_loop(256);
    const auto m = build_ftc_model(g, 10.0).second;
    REQUIRE(m.chain.r2 == m.chain.r1 / 2);
    const auto touching = certify_ftc(g, g, 10.0);
    CHECK_FALSE(touching.issued);
    CHECK(touching.reason == Refusal::NotTransverse);
    CHECK(touching.detail.find("touch") != std::string::npos);
    CHECK(certify_ftc(g, g, m.chain.r1 * 0.99).issued);
  }

  TEST_CASE("ftc verdict is isometry-equivariant") {
    const auto g = shapes::figure_eight_loop(160);
    const auto h = shapes::perturbed(g, 0.002, 9);
    const auto a = certify_ftc(g, h, 0.2);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto mo = shapes::RigidMotion::random(seed);
      const auto b = certify_ftc(g.transformed(mo), h.transformed(mo), 0.2);
      CHECK(a.issued == b.issued);
      CHECK(b.chain.r1 == doctest::Approx(a.chain.r1).epsilon(1e-9));
      CHECK(b.chain.delta == doctest::Approx(a.chain.delta).epsilon(1e-9));
      CHECK(b.closeness.delta == doctest::Approx(a.closeness.delta).epsilon(1e-9));
    }
  }

  TEST_CASE("locally flat witnesses") {
    const auto strands = shapes::parallel_strands(1.0, 4.0);
    const auto w = locally_flat_witness(strands, {1.3, 0, 0});
    CHECK(w.strand_count == 2);
    CHECK(w.radial);
    const auto theta = shapes::theta_graph(24, kPi / 20);
    const auto v = locally_flat_witness(theta, {-1, 0, 0});
    CHECK(v.strand_count == 3);
    CHECK(v.radial);
    const auto sq = shapes::square_loop();
    const auto c = locally_flat_witness(sq, {1, 0, 0});
    CHECK(c.strand_count == 2);
    CHECK(c.radius <= 0.5);
    CHECK(c.radial);
  }
}
