#include "ftc/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ftc {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> w;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t j = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > j) w.push_back(line.substr(j, i - j));
  }
  return w;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& msg) {
  throw Error("line " + std::to_string(line) + ": " + msg);
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    fail_at(line, "bad number '" + std::string(s) + "'");
  return v;
}

long parse_int(std::string_view s, std::size_t line) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail_at(line, "bad integer '" + std::string(s) + "'");
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    fail_at(line, "id out of range '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, p);
}

GraphFile parse_graph_file(std::string_view text, bool check_embedding, double tolerance) {
  struct PendingArc {
    ArcId id;
    VertexId head, tail;
    bool closed;
    std::size_t line;
    std::vector<Point> points;
  };
  GraphFile out;
  std::vector<PendingArc> arcs;
  bool header = false;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto w = split_words(line);
    if (w.empty() || w[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (!header) {
      if (w.size() != 2 || w[0] != "ftcgraph") fail_at(line_no, "expected header 'ftcgraph 1'");
      if (w[1] != "1") fail_at(line_no, "unsupported format version '" + std::string(w[1]) + "'");
      header = true;
    } else if (w[0] == "units") {
      const std::size_t at = line.find("units") + 5;
      std::string_view rest = line.substr(at);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) rest.remove_suffix(1);
      out.units = std::string(rest);
    } else if (w[0] == "v") {
      if (w.size() != 5) fail_at(line_no, "vertex record needs 'v id x y z'");
      const VertexId id = static_cast<VertexId>(parse_int(w[1], line_no));
      if (out.graph.has_vertex(id)) fail_at(line_no, "duplicate vertex id " + std::to_string(id));
      out.graph.add_vertex(id, {parse_double(w[2], line_no), parse_double(w[3], line_no), parse_double(w[4], line_no)});
    } else if (w[0] == "a") {
      if (w.size() != 4 && !(w.size() == 5 && w[4] == "closed"))
        fail_at(line_no, "arc record needs 'a id head tail [closed]'");
      PendingArc a{static_cast<ArcId>(parse_int(w[1], line_no)), static_cast<VertexId>(parse_int(w[2], line_no)),
                   static_cast<VertexId>(parse_int(w[3], line_no)), w.size() == 5, line_no, {}};
      for (const auto& b : arcs)
        if (b.id == a.id) fail_at(line_no, "duplicate arc id " + std::to_string(a.id));
      if (a.closed != (a.head == a.tail)) fail_at(line_no, "'closed' must be given exactly when head equals tail");
      arcs.push_back(std::move(a));
    } else if (w[0] == "p") {
      if (arcs.empty()) fail_at(line_no, "point record before any arc");
      if (w.size() != 4) fail_at(line_no, "point record needs 'p x y z'");
      if (line.empty() || (line.front() != ' ' && line.front() != '\t')) fail_at(line_no, "point records must be indented");
      arcs.back().points.push_back({parse_double(w[1], line_no), parse_double(w[2], line_no), parse_double(w[3], line_no)});
    } else {
      fail_at(line_no, "unknown record '" + std::string(w[0]) + "'");
    }
    if (end == text.size()) break;
  }
  if (!header) throw Error("line 1: missing header 'ftcgraph 1'");
  for (auto& a : arcs) {
    for (VertexId v : {a.head, a.tail})
      if (!out.graph.has_vertex(v)) fail_at(a.line, "arc " + std::to_string(a.id) + " references unknown vertex id " + std::to_string(v));
    if (a.points.size() < 2) fail_at(a.line, "arc " + std::to_string(a.id) + " needs at least two points");
    out.graph.add_arc(a.id, a.head, a.tail, std::move(a.points));
  }
  out.graph.validate(false);
  if (check_embedding) {
    const auto sep = min_separation(SegmentSoup::from_graph(out.graph));
    if (sep.found && sep.distance <= tolerance * std::max(1.0, out.graph.diameter()))
      throw Error("graph is not embedded: non-adjacent segments at distance " + format_number(sep.distance));
  }
  return out;
}

EmbeddedGraph parse_graph(std::string_view text, bool check_embedding, double tolerance) {
  return parse_graph_file(text, check_embedding, tolerance).graph;
}

std::string serialize_graph(const EmbeddedGraph& g, const std::string& units) {
  std::ostringstream os;
  os << "ftcgraph 1\n";
  if (!units.empty()) os << "units " << units << "\n";
  auto point = [&](const Point& p) {
    os << format_number(p.x) << ' ' << format_number(p.y) << ' ' << format_number(p.z) << '\n';
  };
  for (const auto& v : g.vertices()) {
    os << "v " << v.id << ' ';
    point(v.position);
  }
  for (const auto& a : g.arcs()) {
    os << "a " << a.id << ' ' << a.head << ' ' << a.tail << (a.curve.closed ? " closed" : "") << '\n';
    for (const auto& p : a.curve.points) {
      os << "  p ";
      point(p);
    }
  }
  return os.str();
}

GraphFile read_graph_file(const std::string& path, bool check_embedding, double tolerance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_graph_file(ss.str(), check_embedding, tolerance);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

// ---- reports ---------------------------------------------------------------------

std::string format_chain(const RadiiChain& c) {
  std::ostringstream os;
  os << "chain.r1 " << format_number(c.r1) << '\n'
     << "chain.r2 " << format_number(c.r2) << '\n'
     << "chain.r3 " << format_number(c.r3) << '\n'
     << "chain.r3_measured " << format_number(c.r3_measured) << '\n'
     << "chain.r4 " << format_number(c.r4) << '\n'
     << "chain.delta " << format_number(c.delta) << '\n'
     << "chain.epsilon " << format_number(c.epsilon) << '\n'
     << "chain.consistent " << (c.consistent() ? "yes" : "no") << '\n';
  return os.str();
}

std::string format_closeness(const ClosenessReport& r) {
  std::ostringstream os;
  os << "delta " << format_number(r.delta) << '\n'
     << "theta " << format_number(r.theta) << '\n'
     << "delta_witness " << r.delta_witness.arc << ' ' << format_number(r.delta_witness.s) << '\n'
     << "theta_witness " << r.theta_witness.arc << ' ' << format_number(r.theta_witness.s) << '\n';
  return os.str();
}

std::string format_certificate(const IsotopyCertificate& c) {
  std::ostringstream os;
  os << "certificate " << to_string(c.criterion) << '\n'
     << "issued " << (c.issued ? "yes" : "no") << '\n'
     << "reason " << to_string(c.reason) << '\n';
  if (!c.detail.empty()) os << "detail " << c.detail << '\n';
  os << format_closeness(c.closeness)
     << "correspondence " << (c.refined_correspondence ? "refined" : "default") << '\n'
     << "theta_limit " << format_number(c.theta_limit) << '\n'
     << "motion_bound " << format_number(c.motion_bound) << '\n';
  if (c.criterion == Criterion::Thick) {
    os << "tau " << format_number(c.tau) << '\n';
  } else {
    os << "budget " << format_number(c.budget) << '\n'
       << format_chain(c.chain)
       << "max_leaf_distance " << format_number(c.max_leaf_distance) << '\n'
       << "max_leaf_angle " << format_number(c.max_leaf_angle) << '\n';
  }
  return os.str();
}

std::string format_rounding(const RoundingReport& r) {
  std::ostringstream os;
  os << "spacing " << format_number(r.spacing) << '\n'
     << "fillet_radius " << format_number(r.fillet_radius) << '\n'
     << "d " << format_number(r.d) << '\n'
     << "phi " << format_number(r.phi) << '\n'
     << "min_radius " << format_number(r.min_radius) << '\n'
     << "max_corner_cut " << format_number(r.max_corner_cut) << '\n'
     << "polygon_curvature " << format_number(r.polygon_curvature) << '\n'
     << "output_curvature " << format_number(r.output_curvature) << '\n'
     << "sketch_bound_holds " << (r.sketch_bound_holds() ? "yes" : "no") << '\n';
  return os.str();
}

std::string format_diagram(const Diagram& d) {
  std::ostringstream os;
  const Vec3& v = d.direction.vec();
  os << "direction " << format_number(v.x) << ' ' << format_number(v.y) << ' ' << format_number(v.z) << '\n';
  for (std::size_t k = 0; k < d.strands.size(); ++k) {
    os << "s " << k << ' ' << (d.closed[k] ? 1 : 0) << '\n';
    for (const auto& q : d.strands[k]) os << "  q " << format_number(q.x) << ' ' << format_number(q.y) << '\n';
  }
  for (const auto& c : d.crossings)
    os << "c " << c.over.strand << ' ' << c.over.segment << ' ' << format_number(c.over.t) << ' ' << c.under.strand
       << ' ' << c.under.segment << ' ' << format_number(c.under.t) << ' ' << c.sign << ' '
       << format_number(c.location.x) << ' ' << format_number(c.location.y) << '\n';
  return os.str();
}

// ---- meshes ------------------------------------------------------------------------

namespace {

struct ObjWriter {
  std::ostringstream os;
  std::size_t count = 0;
  std::size_t vertex(const Point& p) {
    os << "v " << format_number(p.x) << ' ' << format_number(p.y) << ' ' << format_number(p.z) << '\n';
    return ++count;
  }
};

}  // namespace

std::string neighborhood_obj(const NeighborhoodModel& m, int segments) {
  const int seg = std::max(4, segments);
  const int rings = seg / 2;
  ObjWriter w;
  w.os << "# balls " << m.balls.size() << " tubes " << m.tubes.size() << '\n';
  for (std::size_t b = 0; b < m.balls.size(); ++b) {
    const Ball& ball = m.balls[b];
    w.os << "g ball_" << b << '\n';
    const std::size_t top = w.vertex(ball.center + Vec3{0, 0, ball.radius});
    std::vector<std::size_t> grid;
    for (int i = 1; i < rings; ++i) {
      const double th = kPi * i / rings;
      for (int j = 0; j < seg; ++j) {
        const double ph = 2.0 * kPi * j / seg;
        grid.push_back(w.vertex(ball.center + ball.radius * Vec3{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                                                 std::cos(th)}));
      }
    }
    const std::size_t bottom = w.vertex(ball.center - Vec3{0, 0, ball.radius});
    auto at = [&](int i, int j) { return grid[static_cast<std::size_t>(i * seg + (j % seg))]; };
    for (int j = 0; j < seg; ++j) w.os << "f " << top << ' ' << at(0, j) << ' ' << at(0, j + 1) << '\n';
    for (int i = 0; i + 1 < rings - 1; ++i)
      for (int j = 0; j < seg; ++j)
        w.os << "f " << at(i, j) << ' ' << at(i + 1, j) << ' ' << at(i + 1, j + 1) << ' ' << at(i, j + 1) << '\n';
    for (int j = 0; j < seg; ++j) w.os << "f " << at(rings - 2, j + 1) << ' ' << at(rings - 2, j) << ' ' << bottom << '\n';
  }
  for (std::size_t t = 0; t < m.tubes.size(); ++t) {
    const Tube& tube = m.tubes[t];
    if (tube.core.size() < 2 || tube.disk_radius <= 0.0) continue;
    w.os << "g tube_" << t << '\n';
    std::vector<std::size_t> prev;
    for (std::size_t i = 0; i < tube.core.size(); ++i) {
      const double sigma = tube.core_sigma[i];
      const Point& q = tube.core[i];
      const Vec3 n = tube.leaves.normal(sigma, q);
      const Vec3 u = any_orthogonal(n);
      const Vec3 v = cross(n, u);
      std::vector<std::size_t> ring;
      for (int j = 0; j < seg; ++j) {
        const double ph = 2.0 * kPi * j / seg;
        ring.push_back(w.vertex(tube.leaves.disk_point(sigma, q, std::cos(ph) * u + std::sin(ph) * v, tube.disk_radius)));
      }
      if (!prev.empty())
        for (int j = 0; j < seg; ++j)
          w.os << "f " << prev[j] << ' ' << ring[j] << ' ' << ring[(j + 1) % seg] << ' ' << prev[(j + 1) % seg] << '\n';
      prev = std::move(ring);
    }
  }
  return w.os.str();
}

std::string polylines_obj(const std::vector<std::vector<Point>>& arcs) {
  ObjWriter w;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    w.os << "g arc_" << a << '\n';
    std::vector<std::size_t> ids;
    for (const auto& p : arcs[a]) ids.push_back(w.vertex(p));
    w.os << 'l';
    for (std::size_t id : ids) w.os << ' ' << id;
    w.os << '\n';
  }
  return w.os.str();
}

std::string format_frame(const IsotopyFrames& frames, std::size_t i) {
  const Frame& f = frames.frames.at(i);
  std::ostringstream os;
  os << "frame " << i << '\n'
     << "time " << format_number(f.time) << '\n'
     << "embedded " << (f.embedded ? "yes" : "no") << '\n'
     << "min_separation " << format_number(f.min_separation) << '\n'
     << "max_displacement " << format_number(f.max_displacement) << '\n';
  for (std::size_t a = 0; a < f.arcs.size(); ++a) {
    os << "arc " << frames.arc_ids[a] << ' ' << f.arcs[a].size() << '\n';
    for (const auto& p : f.arcs[a])
      os << "  p " << format_number(p.x) << ' ' << format_number(p.y) << ' ' << format_number(p.z) << '\n';
  }
  return os.str();
}

std::string write_frames(const IsotopyFrames& frames, const std::string& prefix) {
  std::ostringstream index;
  index << "frames " << frames.frames.size() << '\n'
        << "motion_bound " << format_number(frames.motion_bound) << '\n'
        << "max_displacement " << format_number(frames.max_displacement) << '\n'
        << "all_embedded " << (frames.all_embedded ? "yes" : "no") << '\n';
  for (std::size_t i = 0; i < frames.frames.size(); ++i) {
    char num[16];
    std::snprintf(num, sizeof num, "%03zu", i);
    const std::string base = prefix + "_frame_" + num;
    write_text_file(base + ".txt", format_frame(frames, i));
    write_text_file(base + ".obj", polylines_obj(frames.frames[i].arcs));
    index << format_number(frames.frames[i].time) << ' ' << (frames.frames[i].embedded ? "yes" : "no") << ' ' << base
          << ".txt " << base << ".obj\n";
  }
  const std::string path = prefix + "_frames.index";
  write_text_file(path, index.str());
  return path;
}

}  // namespace ftc
