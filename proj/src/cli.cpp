#include <algorithm>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ftc/io.hpp"

namespace ftc {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRefused = 2;

struct Inputs {
  RunConfig config;
  std::string mode = "auto";
  std::string out = "out";
  int threads = -1;
  std::string graph_a, graph_b;
  double tau = 0.0;
  double spacing = 0.0;
  double fillet_factor = 5.0;
  double eps = 0.05;
  double offset = 0.0;
  std::size_t p = 0, q = 0;
  std::string criterion = "ftc";
  bool diagram = false;
  bool write_out = false;
};

CorrespondenceMode parse_mode(const std::string& m) {
  if (m == "default") return CorrespondenceMode::Default;
  if (m == "refined") return CorrespondenceMode::Refined;
  return CorrespondenceMode::Auto;
}

EmbeddedGraph load(const std::string& path, const RunConfig& cfg) {
  return read_graph_file(path, true, cfg.tolerance).graph;
}

const PolylineArc& single_loop(const EmbeddedGraph& g, const char* what) {
  if (g.arcs().size() != 1 || !g.arcs()[0].curve.closed)
    throw Error(std::string(what) + " needs a graph with exactly one closed arc");
  return g.arcs()[0].curve;
}

int report_certificate(const IsotopyCertificate& c, std::ostream& out) {
  out << format_certificate(c);
  return c.issued ? kExitOk : kExitRefused;
}

// Default correspondence first; in auto mode a refused pairing is retried
// with the refined one.
std::pair<IsotopyCertificate, Correspondence> thick_certificate(const EmbeddedGraph& k, const EmbeddedGraph& k2,
                                                                const Inputs& in) {
  const auto mode = in.config.mode;
  const std::optional<double> tau = in.tau > 0.0 ? std::optional<double>(in.tau) : std::nullopt;
  Correspondence c = default_correspondence(k, k2);
  if (mode == CorrespondenceMode::Refined) c = refine_correspondence(k, k2, c);
  IsotopyCertificate cert = certify_thick(k, k2, c, tau);
  if (!cert.issued && mode == CorrespondenceMode::Auto) {
    Correspondence r = refine_correspondence(k, k2, c);
    IsotopyCertificate second = certify_thick(k, k2, r, tau);
    if (second.issued) return {second, r};
  }
  return {cert, c};
}

int cmd_tc(const Inputs& in, std::ostream& out) {
  const auto g = load(in.graph_a, in.config);
  double sum = 0.0;
  for (const auto& a : g.arcs()) {
    const double k = total_curvature(a.curve);
    sum += k;
    out << "total_curvature_per_arc " << a.id << ' ' << format_number(k) << '\n';
  }
  out << "total_curvature " << format_number(sum) << '\n';
  return kExitOk;
}

int cmd_thickness(const Inputs& in, std::ostream& out) {
  const auto g = load(in.graph_a, in.config);
  for (const auto& a : g.arcs()) {
    if (!a.curve.closed) throw Error("thickness needs closed arcs; arc " + std::to_string(a.id) + " is open");
    const auto t = discrete_thickness(a.curve);
    out << "arc " << a.id << '\n'
        << "  tau_hat " << format_number(t.tau_hat) << '\n'
        << "  min_rad " << format_number(t.min_rad) << '\n'
        << "  dcsd " << format_number(t.dcsd) << '\n'
        << "  mechanism " << (t.mechanism == ThicknessMechanism::Curvature ? "curvature" : "self-distance") << '\n';
  }
  out << "link_thickness " << format_number(link_thickness(g)) << '\n';
  return kExitOk;
}

int cmd_closeness(const Inputs& in, std::ostream& out) {
  const auto g = load(in.graph_a, in.config);
  const auto g2 = load(in.graph_b, in.config);
  Correspondence c = default_correspondence(g, g2);
  if (in.config.mode == CorrespondenceMode::Refined) c = refine_correspondence(g, g2, c);
  out << "correspondence " << (c.refined ? "refined" : "default") << '\n' << format_closeness(measure_closeness(g, g2, c));
  return kExitOk;
}

int cmd_certify_thick(const Inputs& in, std::ostream& out) {
  const auto k = load(in.graph_a, in.config);
  const auto k2 = load(in.graph_b, in.config);
  return report_certificate(thick_certificate(k, k2, in).first, out);
}

int cmd_certify_ftc(const Inputs& in, std::ostream& out) {
  const auto g = load(in.graph_a, in.config);
  const auto g2 = load(in.graph_b, in.config);
  return report_certificate(certify_ftc(g, g2, in.config.epsilon, in.config.mode), out);
}

int cmd_neighborhood(const Inputs& in, std::ostream& out) {
  const auto g = load(in.graph_a, in.config);
  const auto [decomposition, model] = build_ftc_model(g, in.config.epsilon);
  const std::string path = in.out + "_neighborhood.obj";
  write_text_file(path, neighborhood_obj(model));
  out << "points " << decomposition.points.size() << '\n'
      << "subarcs " << decomposition.subarcs.size() << '\n'
      << "budget " << format_number(decomposition.budget) << '\n'
      << format_chain(model.chain) << "balls " << model.balls.size() << '\n'
      << "tubes " << model.tubes.size() << '\n'
      << "max_strand_normal_angle " << format_number(model.max_strand_normal_angle) << '\n'
      << "max_disk_drift " << format_number(model.max_disk_drift) << '\n'
      << "mesh " << path << '\n';
  return kExitOk;
}

int cmd_frames(const Inputs& in, std::ostream& out) {
  const auto g = load(in.graph_a, in.config);
  const auto g2 = load(in.graph_b, in.config);
  if (in.config.frames < 2) throw Error("--frames must be at least 2");
  IsotopyFrames frames;
  if (in.criterion == "thick") {
    const auto [cert, c] = thick_certificate(g, g2, in);
    if (!cert.issued) return report_certificate(cert, out);
    frames = assemble_thick_frames(g, g2, cert, c, in.config.frames);
  } else {
    const auto construction = certify_ftc_construction(g, g2, in.config.epsilon, in.config.mode);
    if (!construction.certificate.issued) return report_certificate(construction.certificate, out);
    frames = assemble_frames(g, g2, construction, in.config.frames);
  }
  const std::string index = write_frames(frames, in.out);
  out << "frames " << frames.frames.size() << '\n'
      << "motion_bound " << format_number(frames.motion_bound) << '\n'
      << "max_displacement " << format_number(frames.max_displacement) << '\n'
      << "all_embedded " << (frames.all_embedded ? "yes" : "no") << '\n'
      << "index " << index << '\n';
  if (!frames.all_embedded) throw Error("a sampled frame is not embedded");
  return kExitOk;
}

int cmd_inscribe(const Inputs& in, std::ostream& out) {
  const auto file = read_graph_file(in.graph_a, true, in.config.tolerance);
  const auto p = inscribe_polygon(file.graph, in.spacing);
  const std::string text = serialize_graph(p, file.units);
  if (!in.write_out) {
    out << text;
    return kExitOk;
  }
  const std::string path = in.out + ".graph";
  write_text_file(path, text);
  const auto c = measure_closeness(file.graph, p, default_correspondence(file.graph, p));
  out << format_closeness(c) << "graph " << path << '\n';
  return kExitOk;
}

int cmd_round(const Inputs& in, std::ostream& out) {
  const auto file = read_graph_file(in.graph_a, true, in.config.tolerance);
  const PolylineArc& k = single_loop(file.graph, "round");
  const double tau = in.tau > 0.0 ? in.tau : discrete_thickness(k).tau_hat;
  const auto spaced = equal_arclength_points(k, tau);
  const auto rounded = fillet_round(spaced.polygon(), in.fillet_factor * spaced.spacing);
  const auto tube = dcsd_tube_check(rounded.curve, tau / 5.0);
  out << "tau " << format_number(tau) << '\n'
      << "points " << spaced.points.size() << '\n'
      << format_rounding(rounded.report) << "tube_diameter " << format_number(tau / 5.0) << '\n'
      << "tube_thickness " << format_number(tube.thickness) << '\n'
      << "tube_check " << (tube.pass ? "pass" : "fail") << '\n';
  if (in.write_out) {
    const std::string path = in.out + ".graph";
    std::vector<Point> pts(rounded.curve.points.begin(), rounded.curve.points.end() - 1);
    write_text_file(path, serialize_graph(make_loop_graph(pts), file.units));
    out << "graph " << path << '\n';
  }
  return kExitOk;
}

int cmd_lk(const Inputs& in, std::ostream& out) {
  const auto g = load(in.graph_a, in.config);
  if (g.arcs().size() != 2 || !g.arcs()[0].curve.closed || !g.arcs()[1].curve.closed)
    throw Error("lk needs a graph with exactly two closed arcs");
  const auto& a = g.arcs()[0].curve;
  const auto& b = g.arcs()[1].curve;
  out << "linking_number " << linking_number(a, b, in.config.seed) << '\n'
      << "gauss_integral " << format_number(gauss_linking_integral(a, b)) << '\n';
  return kExitOk;
}

int cmd_det(const Inputs& in, std::ostream& out) {
  const auto g = load(in.graph_a, in.config);
  const PolylineArc& k = single_loop(g, "det");
  const Diagram d = project_generic(std::vector<PolylineArc>{k}, in.config.seed);
  out << "crossings " << d.crossings.size() << '\n' << "determinant " << goeritz_determinant(d) << '\n';
  if (in.diagram) out << format_diagram(d);
  return kExitOk;
}

int cmd_theta(const Inputs& in, std::ostream& out) {
  const auto file = read_graph_file(in.graph_a, true, in.config.tolerance);
  const PolylineArc& k = single_loop(file.graph, "theta");
  const std::size_t n = k.points.size() - 1;
  if (in.p >= n || in.q >= n || in.p == in.q) throw Error("--p and --q must be distinct point indices below " + std::to_string(n));
  const auto theta = make_theta(k, k.points[in.p], k.points[in.q], in.eps, in.config.seed);
  out << "embedded " << (theta.embedded ? "yes" : "no") << '\n'
      << "max_move " << format_number(theta.max_move) << '\n'
      << "attempts " << theta.attempts << '\n';
  if (!theta.embedded) return kExitRefused;
  if (in.offset > 0.0) {
    const auto z = zero_framed_parallel(theta, in.offset);
    out << "twists " << z.twists << '\n'
        << "initial_linking " << z.initial_linking << '\n'
        << "linking " << z.linking << '\n'
        << "clearance " << format_number(z.clearance) << '\n';
  }
  if (in.write_out) {
    const std::string path = in.out + "_theta.graph";
    write_text_file(path, serialize_graph(theta.graph(), file.units));
    out << "graph " << path << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certify ambient isotopy between nearby polygonal graphs.", "ftc_isotopy"};
  app.require_subcommand(1);
  app.fallthrough();
  Inputs in;
  app.add_option("--seed", in.config.seed, "Seed for projections and perturbations (default 0)");
  app.add_option("--tolerance", in.config.tolerance, "Embedding tolerance relative to the extent (default 1e-9)")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", in.threads, "Worker cap; 0 picks the hardware concurrency")->check(CLI::NonNegativeNumber);
  app.add_option("--out", in.out, "Prefix for written files (default 'out')");

  auto one = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("graph", in.graph_a, "Graph file")->required()->check(CLI::ExistingFile);
    return s;
  };
  auto two = [&](const char* name, const char* help) {
    CLI::App* s = one(name, help);
    s->add_option("target", in.graph_b, "Target graph file")->required()->check(CLI::ExistingFile);
    s->add_option("--mode", in.mode, "Correspondence: auto, default or refined")
        ->check(CLI::IsMember({"auto", "default", "refined"}));
    return s;
  };
  auto epsilon = [&](CLI::App* s) {
    s->add_option("--epsilon", in.config.epsilon, "Motion bound epsilon (default 0.1)")->check(CLI::PositiveNumber);
  };

  std::map<CLI::App*, int (*)(const Inputs&, std::ostream&)> handlers;
  handlers[one("tc", "Total curvature per arc")] = cmd_tc;
  handlers[one("thickness", "Discrete thickness of closed arcs")] = cmd_thickness;
  handlers[two("closeness", "Distance and tangent angle under the correspondence")] = cmd_closeness;
  {
    CLI::App* s = two("certify-thick", "Thick-curve isotopy certificate");
    s->add_option("--tau", in.tau, "Thickness to use instead of the measured one")->check(CLI::PositiveNumber);
    handlers[s] = cmd_certify_thick;
  }
  {
    CLI::App* s = two("certify-ftc", "Finite-total-curvature isotopy certificate");
    epsilon(s);
    handlers[s] = cmd_certify_ftc;
  }
  {
    CLI::App* s = one("neighborhood", "Ball-and-tube neighborhood mesh");
    epsilon(s);
    handlers[s] = cmd_neighborhood;
  }
  {
    CLI::App* s = two("frames", "Sampled isotopy frames");
    epsilon(s);
    s->add_option("--frames", in.config.frames, "Number of frames (default 50)");
    s->add_option("--criterion", in.criterion, "ftc or thick")->check(CLI::IsMember({"ftc", "thick"}));
    s->add_option("--tau", in.tau, "Thickness for the thick criterion")->check(CLI::PositiveNumber);
    handlers[s] = cmd_frames;
  }
  {
    CLI::App* s = one("inscribe", "Inscribed polygon with the given spacing");
    s->add_option("--spacing", in.spacing, "Target edge length")->required()->check(CLI::PositiveNumber);
    handlers[s] = cmd_inscribe;
  }
  {
    CLI::App* s = one("round", "Equal spacing and fillet rounding of a closed curve");
    s->add_option("--tau", in.tau, "Thickness to use instead of the measured one")->check(CLI::PositiveNumber);
    s->add_option("--fillet", in.fillet_factor, "Fillet radius in units of the spacing (default 5)")
        ->check(CLI::PositiveNumber);
    handlers[s] = cmd_round;
  }
  handlers[one("lk", "Linking number of a two-component link")] = cmd_lk;
  {
    CLI::App* s = one("det", "Knot determinant");
    s->add_flag("--diagram", in.diagram, "Also print the projection");
    handlers[s] = cmd_det;
  }
  {
    CLI::App* s = one("theta", "Theta graph from a closed curve");
    s->add_option("--p", in.p, "Index of the first point")->required();
    s->add_option("--q", in.q, "Index of the second point")->required();
    s->add_option("--eps", in.eps, "Chord perturbation bound (default 0.05)")->check(CLI::PositiveNumber);
    s->add_option("--offset", in.offset, "Also build the zero-framed parallel at this offset")
        ->check(CLI::PositiveNumber);
    handlers[s] = cmd_theta;
  }

  std::vector<std::string> reversed_args(args.rbegin(), args.rend());
  try {
    app.parse(reversed_args);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* scope = &app;
    for (const CLI::App* s : app.get_subcommands()) scope = s;
    err << "error: " << e.what() << "\n\n" << scope->help();
    return kExitError;
  }

  in.config.mode = parse_mode(in.mode);
  in.write_out = app.count("--out") > 0;
  if (in.threads >= 0) ::setenv("FTC_ISOTOPY_THREADS", std::to_string(in.threads).c_str(), 1);

  for (const auto& [sub, handler] : handlers) {
    if (!sub->parsed()) continue;
    // Buffered so that a failing command never leaves a partial report.
    std::ostringstream buffer;
    try {
      const int code = handler(in, buffer);
      out << buffer.str();
      return code;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitError;
    }
  }
  err << app.help();
  return kExitError;
}

}  // namespace ftc
