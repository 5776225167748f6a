#include "ftc/invariants.hpp"

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <tuple>

namespace ftc {

namespace {

constexpr int kMaxAttempts = 64;
constexpr double kMinCrossingAngle = 1e-6;

Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
double cross2(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
double dot2(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
double norm2(const Point2& a) { return std::hypot(a.x, a.y); }
Point2 lerp2(const Point2& a, const Point2& b, double t) { return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t}; }

double planar_segment_distance(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  return segment_distance({a.x, a.y, 0}, {b.x, b.y, 0}, {c.x, c.y, 0}, {d.x, d.y, 0}).distance;
}

struct Strand {
  const PolylineArc* arc;
  long head_key;
  long tail_key;
};

struct Seg2 {
  std::size_t strand = 0;
  std::size_t index = 0;
  long key_a = 0, key_b = 0;
  Point2 a, b;
  double ha = 0.0, hb = 0.0;
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
};

Vec3 attempt_direction(std::uint64_t seed, int attempt) {
  if (seed == 0 && attempt == 0) return {0, 0, 1};
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double z = uni(rng);
  const double phi = kPi * uni(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

// Returns false when the pair makes the projection non-generic.
bool examine_pair(const Seg2& A, const Seg2& B, double tol, std::vector<Crossing>& out) {
  const bool adjacent = A.key_a == B.key_a || A.key_a == B.key_b || A.key_b == B.key_a || A.key_b == B.key_b;
  const Point2 r = A.b - A.a, s = B.b - B.a;
  const double lr = norm2(r), ls = norm2(s);
  if (adjacent) {
    // Adjacent segments meet only at the shared end; they must not fold
    // onto each other in the plane.
    const bool shared_a = A.key_a == B.key_a || A.key_a == B.key_b;
    const Point2 base = shared_a ? A.a : A.b;
    const Point2 u = (shared_a ? A.b : A.a) - base;
    const Point2 v = (B.key_a == (shared_a ? A.key_a : A.key_b) ? B.b : B.a) - base;
    return std::atan2(std::abs(cross2(u, v)), dot2(u, v)) > kMinCrossingAngle;
  }
  const double den = cross2(r, s);
  if (std::abs(den) <= std::sin(kMinCrossingAngle) * lr * ls) return planar_segment_distance(A.a, A.b, B.a, B.b) > tol;
  const Point2 w = B.a - A.a;
  const double t = cross2(w, s) / den;
  const double u = cross2(w, r) / den;
  const double ta = tol / lr, ub = tol / ls;
  if (t < -ta || t > 1 + ta || u < -ub || u > 1 + ub) return planar_segment_distance(A.a, A.b, B.a, B.b) > tol;
  if (t <= ta || t >= 1 - ta || u <= ub || u >= 1 - ub) return false;
  const double hA = A.ha + (A.hb - A.ha) * t;
  const double hB = B.ha + (B.hb - B.ha) * u;
  if (std::abs(hA - hB) <= tol) return false;
  Crossing c;
  const bool a_over = hA > hB;
  c.over = a_over ? StrandPosition{A.strand, A.index, t} : StrandPosition{B.strand, B.index, u};
  c.under = a_over ? StrandPosition{B.strand, B.index, u} : StrandPosition{A.strand, A.index, t};
  const double turn = a_over ? cross2(r, s) : cross2(s, r);
  c.sign = turn > 0 ? 1 : -1;
  c.location = lerp2(A.a, A.b, t);
  out.push_back(c);
  return true;
}

bool try_projection(const std::vector<Strand>& strands, const Vec3& dir, Diagram& d) {
  d.direction = Direction(dir);
  d.e1 = any_orthogonal(d.direction.vec());
  d.e2 = cross(d.direction.vec(), d.e1);
  d.strands.assign(strands.size(), {});
  d.closed.assign(strands.size(), false);
  d.crossings.clear();

  std::vector<Seg2> segs;
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
  for (std::size_t k = 0; k < strands.size(); ++k) {
    const auto& pts = strands[k].arc->points;
    d.closed[k] = strands[k].arc->closed;
    std::vector<double> h;
    for (const auto& p : pts) {
      d.strands[k].push_back({dot(p, d.e1), dot(p, d.e2)});
      h.push_back(dot(p, d.direction.vec()));
      lo_x = std::min(lo_x, d.strands[k].back().x);
      hi_x = std::max(hi_x, d.strands[k].back().x);
      lo_y = std::min(lo_y, d.strands[k].back().y);
      hi_y = std::max(hi_y, d.strands[k].back().y);
    }
    const std::size_t n = pts.size();
    auto key = [&](std::size_t i) -> long {
      if (i == 0) return strands[k].head_key;
      if (i + 1 == n) return strands[k].tail_key;
      return static_cast<long>(k + 1) * (1L << 32) + static_cast<long>(i);
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
      Seg2 s;
      s.strand = k;
      s.index = i;
      s.key_a = key(i);
      s.key_b = key(i + 1);
      s.a = d.strands[k][i];
      s.b = d.strands[k][i + 1];
      s.ha = h[i];
      s.hb = h[i + 1];
      s.xmin = std::min(s.a.x, s.b.x);
      s.xmax = std::max(s.a.x, s.b.x);
      s.ymin = std::min(s.a.y, s.b.y);
      s.ymax = std::max(s.a.y, s.b.y);
      segs.push_back(s);
    }
  }
  if (segs.empty()) return true;
  const double tol = 1e-9 * std::max({hi_x - lo_x, hi_y - lo_y, 1e-300});
  for (const auto& s : segs)
    if (norm2(s.b - s.a) <= tol) return false;

  std::vector<std::size_t> order(segs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return segs[i].xmin < segs[j].xmin; });
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Seg2& A = segs[order[a]];
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Seg2& B = segs[order[b]];
      if (B.xmin > A.xmax + tol) break;
      if (B.ymin > A.ymax + tol || A.ymin > B.ymax + tol) continue;
      if (!examine_pair(A, B, tol, d.crossings)) return false;
    }
  }

  // Triple points: two crossings at one place.
  auto& cs = d.crossings;
  std::sort(cs.begin(), cs.end(), [](const Crossing& a, const Crossing& b) { return a.location.x < b.location.x; });
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size() && cs[j].location.x - cs[i].location.x <= tol; ++j)
      if (norm2(cs[j].location - cs[i].location) <= tol) return false;
  std::sort(cs.begin(), cs.end(), [](const Crossing& a, const Crossing& b) {
    return std::tie(a.over.strand, a.over.segment, a.over.t) < std::tie(b.over.strand, b.over.segment, b.over.t);
  });
  return true;
}

Diagram project_strands(const std::vector<Strand>& strands, std::uint64_t seed) {
  Diagram d;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    d.attempts = attempt + 1;
    if (try_projection(strands, attempt_direction(seed, attempt), d)) return d;
  }
  throw Error("no generic projection found after 64 attempts");
}

}  // namespace

Diagram project_generic(const std::vector<PolylineArc>& strands, std::uint64_t seed) {
  std::vector<Strand> s;
  for (std::size_t k = 0; k < strands.size(); ++k) {
    strands[k].validate();
    const long head = -1 - 2 * static_cast<long>(k);
    s.push_back({&strands[k], head, strands[k].closed ? head : head - 1});
  }
  return project_strands(s, seed);
}

Diagram project_generic(const EmbeddedGraph& g, std::uint64_t seed) {
  g.validate();
  std::vector<Strand> s;
  for (const auto& a : g.arcs())
    s.push_back({&a.curve, -1 - static_cast<long>(g.vertex_index(a.head)), -1 - static_cast<long>(g.vertex_index(a.tail))});
  return project_strands(s, seed);
}

int linking_number(const PolylineArc& k1, const PolylineArc& k2, std::uint64_t seed) {
  if (!k1.closed || !k2.closed) throw Error("linking number needs closed curves");
  if (arc_pair_distance(k1, k2) <= 0.0) throw Error("curves intersect");
  const Diagram d = project_generic(std::vector<PolylineArc>{k1, k2}, seed);
  int sum = 0;
  for (const auto& c : d.crossings)
    if (c.over.strand != c.under.strand) sum += c.sign;
  if (sum % 2 != 0) throw Error("odd inter-component crossing sum");
  return sum / 2;
}

double gauss_linking_integral(const PolylineArc& k1, const PolylineArc& k2, int samples_per_segment) {
  const int m = std::max(1, samples_per_segment);
  double total = 0.0;
  for (std::size_t i = 0; i < k1.segment_count(); ++i) {
    const Vec3 d1 = k1.segment_vector(i) / m;
    for (std::size_t j = 0; j < k2.segment_count(); ++j) {
      const Vec3 d2 = k2.segment_vector(j) / m;
      const Vec3 c = cross(d1, d2);
      for (int a = 0; a < m; ++a) {
        const Point x = k1.points[i] + (a + 0.5) * d1;
        for (int b = 0; b < m; ++b) {
          const Vec3 r = x - (k2.points[j] + (b + 0.5) * d2);
          const double n = norm(r);
          total += dot(r, c) / (n * n * n);
        }
      }
    }
  }
  return total / (4.0 * kPi);
}

std::int64_t integer_determinant(const std::vector<std::vector<std::int64_t>>& m) {
  using boost::multiprecision::cpp_int;
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<cpp_int>> a(n, std::vector<cpp_int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw Error("determinant needs a square matrix");
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  }
  int sign = 1;
  cpp_int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    }
    prev = a[k][k];
  }
  const cpp_int det = sign * a[n - 1][n - 1];
  if (det > std::numeric_limits<std::int64_t>::max() || det < std::numeric_limits<std::int64_t>::min())
    throw Error("determinant exceeds 64 bits");
  return static_cast<std::int64_t>(det);
}

std::int64_t goeritz_determinant(const Diagram& d) {
  if (d.strands.size() != 1 || !d.closed[0]) throw Error("Goeritz determinant needs one closed strand");
  const std::size_t n = d.crossings.size();
  if (n == 0) return 1;
  const auto& pts = d.strands[0];

  // Passages along the strand; edge k runs from passage k to passage k+1.
  struct Passage {
    double position;
    std::size_t crossing;
    bool over;
  };
  std::vector<Passage> passages;
  for (std::size_t c = 0; c < n; ++c) {
    const auto& x = d.crossings[c];
    passages.push_back({x.over.segment + x.over.t, c, true});
    passages.push_back({x.under.segment + x.under.t, c, false});
  }
  std::sort(passages.begin(), passages.end(), [](const Passage& a, const Passage& b) { return a.position < b.position; });
  const std::size_t np = passages.size();

  // Half-edge 2e is the start of edge e, 2e+1 its end. Rotation at each
  // crossing lists its four half-edges counterclockwise.
  std::vector<std::array<std::size_t, 4>> rot(n);
  std::vector<std::size_t> rot_crossing(2 * np), rot_pos(2 * np);
  std::vector<std::size_t> over_out(n);
  {
    std::vector<std::vector<std::pair<double, std::size_t>>> around(n);
    for (std::size_t k = 0; k < np; ++k) {
      const auto& p = passages[k];
      const auto& x = d.crossings[p.crossing];
      const std::size_t seg = p.over ? x.over.segment : x.under.segment;
      const Point2 dir = pts[seg + 1] - pts[seg];
      const double ang = std::atan2(dir.y, dir.x);
      const std::size_t out_he = 2 * k;
      const std::size_t in_he = 2 * ((k + np - 1) % np) + 1;
      around[p.crossing].emplace_back(ang, out_he);
      around[p.crossing].emplace_back(ang > 0 ? ang - kPi : ang + kPi, in_he);
      if (p.over) over_out[p.crossing] = out_he;
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::sort(around[c].begin(), around[c].end());
      for (std::size_t i = 0; i < 4; ++i) {
        rot[c][i] = around[c][i].second;
        rot_crossing[rot[c][i]] = c;
        rot_pos[rot[c][i]] = i;
      }
    }
  }

  // Dart 2e + dir walks edge e forward (dir 0) or backward (dir 1); it
  // arrives at half-edge 2e+1 or 2e and continues clockwise.
  auto arrival = [](std::size_t dart) { return (dart % 2 == 0) ? dart + 1 : dart - 1; };
  auto dart_leaving = [](std::size_t he) { return he; };
  auto dart_arriving = [](std::size_t he) { return (he % 2 == 1) ? he - 1 : he + 1; };
  auto next = [&](std::size_t dart) {
    const std::size_t he = arrival(dart);
    const std::size_t c = rot_crossing[he];
    return dart_leaving(rot[c][(rot_pos[he] + 3) % 4]);
  };
  const std::size_t darts = 2 * np;
  std::vector<int> face(darts, -1);
  int faces = 0;
  for (std::size_t s = 0; s < darts; ++s) {
    if (face[s] >= 0) continue;
    std::size_t x = s;
    while (face[x] < 0) {
      face[x] = faces;
      x = next(x);
    }
    ++faces;
  }
  if (static_cast<std::size_t>(faces) != n + 2) throw Error("diagram faces do not match a connected projection");

  // Checkerboard colouring: the two sides of every edge differ.
  std::vector<std::vector<int>> adj(faces);
  for (std::size_t e = 0; e < np; ++e) {
    adj[face[2 * e]].push_back(face[2 * e + 1]);
    adj[face[2 * e + 1]].push_back(face[2 * e]);
  }
  std::vector<int> colour(faces, -1);
  colour[0] = 0;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    const int f = q.front();
    q.pop();
    for (int g : adj[f]) {
      if (colour[g] < 0) {
        colour[g] = 1 - colour[f];
        q.push(g);
      } else if (colour[g] == colour[f]) {
        throw Error("diagram is not checkerboard colourable");
      }
    }
  }

  std::vector<int> white_index(faces, -1);
  int whites = 0;
  for (int f = 0; f < faces; ++f)
    if (colour[f] == 0) white_index[f] = whites++;
  std::vector<std::vector<std::int64_t>> G(whites, std::vector<std::int64_t>(whites, 0));
  for (std::size_t c = 0; c < n; ++c) {
    // Corner i lies between rot[c][i] and rot[c][i+1].
    std::array<int, 4> corner{};
    for (std::size_t i = 0; i < 4; ++i) corner[i] = face[dart_arriving(rot[c][(i + 1) % 4])];
    const std::size_t p = rot_pos[over_out[c]];
    const int eta = colour[corner[p]] == 0 ? 1 : -1;
    const std::size_t w = colour[corner[p]] == 0 ? p : (p + 1) % 4;
    const int i = white_index[corner[w]];
    const int j = white_index[corner[(w + 2) % 4]];
    if (i < 0 || j < 0) throw Error("inconsistent crossing corners");
    if (i != j) {
      G[i][j] -= eta;
      G[j][i] -= eta;
    }
  }
  for (int i = 0; i < whites; ++i) {
    std::int64_t s = 0;
    for (int j = 0; j < whites; ++j)
      if (j != i) s += G[i][j];
    G[i][i] = -s;
  }
  G.pop_back();
  for (auto& row : G) row.pop_back();
  const std::int64_t det = integer_determinant(G);
  return det < 0 ? -det : det;
}

std::int64_t knot_determinant(const PolylineArc& k, std::uint64_t seed) {
  if (!k.closed) throw Error("knot determinant needs a closed curve");
  return goeritz_determinant(project_generic(std::vector<PolylineArc>{k}, seed));
}

// ---- theta graphs --------------------------------------------------------------

EmbeddedGraph ThetaGraph::graph() const {
  EmbeddedGraph g;
  g.add_vertex(0, p);
  g.add_vertex(1, q);
  g.add_arc(0, 0, 1, alpha.points);
  g.add_arc(1, 0, 1, beta.points);
  g.add_arc(2, 1, 0, gamma.points);
  return g;
}

PolylineArc ThetaGraph::alpha_beta() const {
  PolylineArc c;
  c.points = alpha.points;
  for (std::size_t i = beta.points.size() - 1; i-- > 0;) c.points.push_back(beta.points[i]);
  c.closed = true;
  return c;
}

PolylineArc ThetaGraph::alpha_gamma() const {
  PolylineArc c;
  c.points = alpha.points;
  c.points.insert(c.points.end(), gamma.points.begin() + 1, gamma.points.end());
  c.closed = true;
  return c;
}

namespace {

// Arclength position of a point lying on the closed curve.
double locate_on(const PolylineArc& k, const std::vector<double>& cum, const Point& p) {
  double best = std::numeric_limits<double>::infinity(), pos = 0.0;
  for (std::size_t i = 0; i < k.segment_count(); ++i) {
    const auto [dist, t] = point_segment_distance(p, k.points[i], k.points[i + 1]);
    if (dist < best) {
      best = dist;
      pos = cum[i] + t * (cum[i + 1] - cum[i]);
    }
  }
  Point lo = k.points.front(), hi = lo;
  for (const auto& x : k.points) {
    lo = {std::min(lo.x, x.x), std::min(lo.y, x.y), std::min(lo.z, x.z)};
    hi = {std::max(hi.x, x.x), std::max(hi.y, x.y), std::max(hi.z, x.z)};
  }
  if (best > 1e-9 * std::max(1.0, norm(hi - lo))) throw Error("theta endpoint does not lie on the curve");
  return pos >= cum.back() ? 0.0 : pos;
}

// Points of the closed curve from arclength s0 forward to s1 (wrapping).
std::vector<Point> forward_piece(const PolylineArc& k, const std::vector<double>& cum, double s0, double s1) {
  const double L = cum.back();
  const double span = s1 > s0 ? s1 - s0 : s1 + L - s0;
  const double gap = 1e-12 * L;
  std::vector<Point> out{point_at_length(k, cum, s0)};
  const std::size_t n = k.segment_count();
  for (std::size_t pass = 0; pass < 2; ++pass)
    for (std::size_t i = 0; i < n; ++i) {
      const double off = cum[i] + pass * L - s0;
      if (off > gap && off < span - gap) out.push_back(k.points[i]);
    }
  out.push_back(point_at_length(k, cum, s1));
  return out;
}

double graph_separation(const ThetaGraph& t) {
  const EmbeddedGraph g = t.graph();
  const auto sep = min_separation(SegmentSoup::from_graph(g));
  return sep.found ? sep.distance : std::numeric_limits<double>::infinity();
}

}  // namespace

ThetaGraph make_theta(const PolylineArc& k, const Point& p, const Point& q, double eps, std::uint64_t seed) {
  if (!k.closed) throw Error("theta construction needs a closed curve");
  if (!(eps > 0.0)) throw Error("perturbation scale must be positive");
  k.validate();
  const auto cum = cumulative_lengths(k);
  const double sp = locate_on(k, cum, p), sq = locate_on(k, cum, q);
  if (std::abs(sp - sq) <= 1e-12 * cum.back() || distance(p, q) == 0.0) throw Error("theta endpoints coincide");

  ThetaGraph t;
  t.p = p;
  t.q = q;
  t.alpha.points = forward_piece(k, cum, sp, sq);
  t.gamma.points = forward_piece(k, cum, sq, sp);
  t.alpha.points.front() = t.gamma.points.back() = p;
  t.alpha.points.back() = t.gamma.points.front() = q;

  const int pieces = std::clamp(static_cast<int>(std::ceil(4.0 * distance(p, q) / eps)), 4, 4096);
  std::vector<Point> chord;
  for (int i = 0; i <= pieces; ++i) chord.push_back(lerp(p, q, static_cast<double>(i) / pieces));
  const double tol = 1e-9 * std::max(1.0, t.graph().diameter());
  for (int attempt = 0; attempt <= kMaxAttempts; ++attempt) {
    t.attempts = attempt + 1;
    t.beta.points = chord;
    t.max_move = 0.0;
    if (attempt > 0) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
      std::uniform_real_distribution<double> uni(-1.0, 1.0);
      for (int i = 1; i < pieces; ++i) {
        Vec3 v;
        do v = {uni(rng), uni(rng), uni(rng)};
        while (dot(v, v) > 1.0);
        v *= 0.9 * eps;
        t.beta.points[i] += v;
        t.max_move = std::max(t.max_move, norm(v));
      }
    }
    if (graph_separation(t) > tol) {
      t.embedded = true;
      return t;
    }
  }
  throw Error("no embedded theta graph within the perturbation budget");
}

// ---- zero-framed parallel ------------------------------------------------------

namespace {

struct FramedCurve {
  std::vector<Point> points;  // closed loop without the repeated end
  std::vector<double> alpha_fraction;
};

FramedCurve subdivide_loop(const ThetaGraph& theta, double max_step, double alpha_step) {
  const PolylineArc c = theta.alpha_beta();
  const std::size_t alpha_end = theta.alpha.points.size() - 1;
  const double alpha_len = arc_length(theta.alpha);
  FramedCurve out;
  double along = 0.0;
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    const bool on_alpha = i < alpha_end;
    const double len = norm(c.segment_vector(i));
    const double step = on_alpha ? std::min(max_step, alpha_step) : max_step;
    const int parts = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int j = 0; j < parts; ++j) {
      const double f = static_cast<double>(j) / parts;
      out.points.push_back(lerp(c.points[i], c.points[i + 1], f));
      out.alpha_fraction.push_back(on_alpha ? (along + f * len) / alpha_len : 1.0);
    }
    if (on_alpha) along += len;
  }
  return out;
}

PolylineArc push_off(const FramedCurve& fc, double offset, double phase, int twists) {
  const auto& P = fc.points;
  const std::size_t n = P.size();
  std::vector<Vec3> T(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 in = P[i] - P[(i + n - 1) % n], out = P[(i + 1) % n] - P[i];
    T[i] = in / norm(in) + out / norm(out);
    T[i] = T[i] / norm(T[i]);
  }
  // Double-reflection rotation-minimizing frame.
  std::vector<Vec3> R(n + 1);
  R[0] = any_orthogonal(T[0]);
  std::vector<double> s(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const Vec3 v1 = P[j] - P[i];
    const double c1 = dot(v1, v1);
    const Vec3 rL = R[i] - (2.0 / c1) * dot(v1, R[i]) * v1;
    const Vec3 tL = T[i] - (2.0 / c1) * dot(v1, T[i]) * v1;
    const Vec3 v2 = T[j] - tL;
    const double c2 = dot(v2, v2);
    R[i + 1] = c2 > 1e-30 ? rL - (2.0 / c2) * dot(v2, rL) * v2 : rL;
    s[i + 1] = s[i] + std::sqrt(c1);
  }
  const Vec3 BN = cross(T[0], R[n]);
  const double closure = std::atan2(dot(R[0], BN), dot(R[0], R[n]));
  PolylineArc curve;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = phase + closure * s[i] / s[n] + 2.0 * kPi * twists * fc.alpha_fraction[i];
    const Vec3 B = cross(T[i], R[i]);
    curve.points.push_back(P[i] + offset * (std::cos(th) * R[i] + std::sin(th) * B));
  }
  curve.points.push_back(curve.points.front());
  curve.closed = true;
  return curve;
}

double clearance(const PolylineArc& curve, const ThetaGraph& theta) {
  return std::min({arc_pair_distance(curve, theta.alpha), arc_pair_distance(curve, theta.beta),
                   arc_pair_distance(curve, theta.gamma)});
}

}  // namespace

ZeroFramedParallel zero_framed_parallel(const ThetaGraph& theta, double offset) {
  if (!(offset > 0.0)) throw Error("offset must be positive");
  if (!theta.embedded) throw Error("theta graph is not embedded");
  const PolylineArc reference = theta.alpha_gamma();
  const double alpha_len = arc_length(theta.alpha);
  auto build = [&](double phase, int twists) {
    const double alpha_step = alpha_len / (16.0 * std::max(1, std::abs(twists)));
    return push_off(subdivide_loop(theta, 0.5 * offset, alpha_step), offset, phase, twists);
  };
  auto usable = [&](const PolylineArc& c) {
    const auto sep = min_separation(SegmentSoup::from_polylines({c.points}, {{0, 0}}));
    return (!sep.found || sep.distance > 1e-3 * offset) ? clearance(c, theta) : 0.0;
  };

  double phase = 0.0, best = -1.0;
  for (int j = 0; j < 8; ++j) {
    const double ph = 2.0 * kPi * j / 8.0;
    const double cl = usable(build(ph, 0));
    if (cl > best) {
      best = cl;
      phase = ph;
    }
  }
  if (!(best > 1e-3 * offset)) throw Error("offset too large: push-off collides with the theta graph");

  ZeroFramedParallel out;
  out.initial_linking = linking_number(build(phase, 0), reference);
  const int slope = linking_number(build(phase, 1), reference) - out.initial_linking;
  if (slope != 1 && slope != -1) throw Error("twist insertion did not change linking by one");
  out.twists = -out.initial_linking * slope;
  out.curve = build(phase, out.twists);
  out.clearance = usable(out.curve);
  if (!(out.clearance > 1e-3 * offset)) throw Error("offset too large: twisted push-off collides with the theta graph");
  out.linking = linking_number(out.curve, reference);
  if (out.linking != 0) throw Error("zero-framing correction failed");
  return out;
}

}  // namespace ftc
