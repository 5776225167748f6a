#include "ftc/shapes.hpp"

#include <cmath>
#include <random>

namespace ftc::shapes {

EmbeddedGraph sampled_loop(const std::function<Point(double)>& f, int n) {
  if (n < 3) throw Error("a loop needs at least three points");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.push_back(f(2.0 * kPi * i / n));
  return make_loop_graph(std::move(pts));
}

EmbeddedGraph square_loop(double side) {
  return make_loop_graph({{0, 0, 0}, {side, 0, 0}, {side, side, 0}, {0, side, 0}});
}

EmbeddedGraph circle_loop(int n, double r) {
  return sampled_loop([r](double t) { return Point{r * std::cos(t), r * std::sin(t), 0.0}; }, n);
}

EmbeddedGraph stadium_loop(double length, double width, int cap_segments) {
  const double r = width / 2.0;
  const double straight = length - width;
  if (!(straight > 0.0) || cap_segments < 2) throw Error("stadium needs length > width and two cap segments");
  const double chord = 2.0 * r * std::sin(kPi / (2.0 * cap_segments));
  const int pieces = std::max(1, static_cast<int>(std::ceil(straight / chord)));
  const double h = straight / 2.0;
  std::vector<Point> pts;
  for (int i = 0; i < pieces; ++i) pts.push_back({-h + straight * i / pieces, -r, 0.0});
  for (int i = 0; i < cap_segments; ++i) {
    const double a = -kPi / 2.0 + kPi * i / cap_segments;
    pts.push_back({h + r * std::cos(a), r * std::sin(a), 0.0});
  }
  for (int i = 0; i < pieces; ++i) pts.push_back({h - straight * i / pieces, r, 0.0});
  for (int i = 0; i < cap_segments; ++i) {
    const double a = kPi / 2.0 + kPi * i / cap_segments;
    pts.push_back({-h + r * std::cos(a), r * std::sin(a), 0.0});
  }
  return make_loop_graph(std::move(pts));
}

EmbeddedGraph trefoil_loop(int n) {
  return sampled_loop(
      [](double t) {
        return Point{std::sin(t) + 2.0 * std::sin(2.0 * t), std::cos(t) - 2.0 * std::cos(2.0 * t), -std::sin(3.0 * t)};
      },
      n);
}

EmbeddedGraph figure_eight_loop(int n) {
  return sampled_loop(
      [](double t) {
        const double r = 2.0 + std::cos(2.0 * t);
        return Point{r * std::cos(3.0 * t), r * std::sin(3.0 * t), std::sin(4.0 * t)};
      },
      n);
}

EmbeddedGraph hopf_link(int n) {
  EmbeddedGraph g;
  std::vector<Point> a, b;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * (i + 0.5) / n;
    a.push_back({std::cos(t), std::sin(t), 0.0});
    b.push_back({1.0 + std::cos(t), 0.0, std::sin(t)});
  }
  a.push_back(a.front());
  b.push_back(b.front());
  g.add_vertex(0, a.front());
  g.add_vertex(1, b.front());
  g.add_arc(0, 0, 0, std::move(a));
  g.add_arc(1, 1, 1, std::move(b));
  return g;
}

EmbeddedGraph torus_link_2_4(int n) {
  EmbeddedGraph g;
  const double R = 2.0, r = 0.75;
  for (int c = 0; c < 2; ++c) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * i / n;
      const double m = 2.0 * t + c * kPi;
      pts.push_back({(R + r * std::cos(m)) * std::cos(t), (R + r * std::cos(m)) * std::sin(t), r * std::sin(m)});
    }
    pts.push_back(pts.front());
    g.add_vertex(c, pts.front());
    g.add_arc(c, c, c, std::move(pts));
  }
  return g;
}

EmbeddedGraph theta_graph(int n, double half_angle) {
  EmbeddedGraph g;
  const Point a{-1, 0, 0}, b{1, 0, 0};
  g.add_vertex(0, a);
  g.add_vertex(1, b);
  std::vector<Point> line;
  for (int i = 0; i <= n; ++i) line.push_back(lerp(a, b, static_cast<double>(i) / n));
  g.add_arc(0, 0, 1, std::move(line));
  // Circle through a and b whose arc between them spans 2 * half_angle.
  const double R = 1.0 / std::sin(half_angle);
  const double offset = R * std::cos(half_angle);
  for (int s : {1, -1}) {
    std::vector<Point> arc;
    for (int i = 0; i <= n; ++i) {
      const double phi = -half_angle + 2.0 * half_angle * i / n;
      arc.push_back({R * std::sin(phi), s * (R * std::cos(phi) - offset), 0.0});
    }
    arc.front() = a;
    arc.back() = b;
    g.add_arc(s == 1 ? 1 : 2, 0, 1, std::move(arc));
  }
  return g;
}

EmbeddedGraph parallel_strands(double gap, double length) {
  EmbeddedGraph g;
  g.add_vertex(0, {0, 0, 0});
  g.add_vertex(1, {length, 0, 0});
  g.add_vertex(2, {0, gap, 0});
  g.add_vertex(3, {length, gap, 0});
  g.add_arc(0, 0, 1, {{0, 0, 0}, {length, 0, 0}});
  g.add_arc(1, 2, 3, {{0, gap, 0}, {length, gap, 0}});
  return g;
}

namespace {

Vec3 random_in_ball(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Vec3 v{u(rng), u(rng), u(rng)};
    if (dot(v, v) <= 1.0) return radius * v;
  }
}

}  // namespace

EmbeddedGraph perturbed(const EmbeddedGraph& g, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EmbeddedGraph out;
  for (const auto& v : g.vertices()) out.add_vertex(v.id, v.position + random_in_ball(rng, amplitude));
  for (const auto& a : g.arcs()) {
    auto pts = a.curve.points;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) pts[i] = pts[i] + random_in_ball(rng, amplitude);
    pts.front() = out.vertex(a.head).position;
    pts.back() = out.vertex(a.tail).position;
    out.add_arc(a.id, a.head, a.tail, std::move(pts));
  }
  return out;
}

EmbeddedGraph with_local_trefoil(const EmbeddedGraph& loop, std::size_t index, double size) {
  if (loop.arcs().size() != 1 || !loop.arcs().front().curve.closed) throw Error("expected a single loop");
  const auto& P = loop.arcs().front().curve.points;
  if (index + 1 >= P.size()) throw Error("segment index out of range");
  const Vec3 seg = P[index + 1] - P[index];
  if (norm(seg) < 4.0 * size) throw Error("segment too short for the inserted knot");

  const int m = 180;
  std::vector<Point> K;
  for (int i = 0; i < m; ++i) {
    const double t = 2.0 * kPi * i / m;
    K.push_back((size / 6.0) * Point{std::sin(t) + 2.0 * std::sin(2.0 * t), std::cos(t) - 2.0 * std::cos(2.0 * t),
                                     -std::sin(3.0 * t)});
  }
  const Vec3 u = Vec3{0.3, 0.5, 0.8} / norm(Vec3{0.3, 0.5, 0.8});
  std::size_t top = 0;
  for (std::size_t i = 1; i < K.size(); ++i)
    if (dot(K[i], u) > dot(K[top], u)) top = i;
  const int w = 3;
  const auto at = [&](long i) { return K[static_cast<std::size_t>(((i % m) + m) % m)]; };
  const Point e_plus = at(static_cast<long>(top) + w);
  const Point e_minus = at(static_cast<long>(top) - w);
  const double floor_h = std::min(dot(e_plus, u), dot(e_minus, u));
  for (long i = w + 1; i < m - w; ++i)
    if (dot(at(static_cast<long>(top) + i), u) >= floor_h) throw Error("cut point is not extreme");

  const Point E = K[top];
  Vec3 tk = (e_minus - e_plus) - dot(e_minus - e_plus, u) * u;
  tk = tk / norm(tk);
  const Vec3 bk = cross(u, tk);
  const Vec3 T = seg / norm(seg);
  const Vec3 N = any_orthogonal(T);
  const Vec3 B = cross(N, T);
  const Point base = lerp(P[index], P[index + 1], 0.5) - (0.5 * size) * N;
  const auto place = [&](const Point& x) {
    const Vec3 d = x - E;
    return base + dot(d, tk) * T + dot(d, u) * N + dot(d, bk) * B;
  };

  std::vector<Point> pts(P.begin(), P.begin() + static_cast<std::ptrdiff_t>(index) + 1);
  for (long i = w; i <= m - w; ++i) pts.push_back(place(at(static_cast<long>(top) + i)));
  pts.insert(pts.end(), P.begin() + static_cast<std::ptrdiff_t>(index) + 1, P.end());
  const auto& a = loop.arcs().front();
  EmbeddedGraph out;
  out.add_vertex(a.head, pts.front());
  out.add_arc(a.id, a.head, a.tail, std::move(pts));
  return out;
}

RigidMotion RigidMotion::random(std::uint64_t seed, double shift_scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RigidMotion m;
  Vec3 a{n(rng), n(rng), n(rng)};
  m.axis = a / norm(a);
  m.angle = kPi * (u(rng) + 1.0);
  m.shift = shift_scale * Vec3{u(rng), u(rng), u(rng)};
  return m;
}

}  // namespace ftc::shapes
