#pragma once

#include <vector>

#include "ftc/graph.hpp"
#include "ftc/metrics.hpp"

namespace ftc {

/// Inscribed polygon: keeps graph vertices and every point turning at least
/// pi/8, and splits each stretch between kept points into round(len / h)
/// pieces of equal arclength (at least one).
EmbeddedGraph inscribe_polygon(const EmbeddedGraph& g, double h);

struct EqualSpacing {
  std::vector<Point> points;  // n points, base point first, not repeated
  double spacing = 0.0;

  /// The closed polygon through the points.
  PolylineArc polygon() const;
};

/// Points at equal arclength r along a closed curve, with
/// r = L / n in (tau/50, tau/40) and n as close to 45 L / tau as allowed.
EqualSpacing equal_arclength_points(const PolylineArc& k, double tau);

struct RoundingReport {
  double spacing = 0.0;        // shortest polygon edge
  double fillet_radius = 0.0;
  double d = 0.0;              // measured distance to the polygon
  double phi = 0.0;            // measured tangent angle to the polygon
  double min_radius = 0.0;     // smallest consecutive-triple circumradius of the output
  double max_corner_cut = 0.0; // largest rho (sec(turn/2) - 1) over corners
  double polygon_curvature = 0.0;
  double output_curvature = 0.0;

  /// The inequality d <= (sec phi - 1) r / 2 from the rounding sketch,
  /// evaluated on the measured values.
  bool sketch_bound_holds() const;
};

struct Rounded {
  PolylineArc curve;
  RoundingReport report;
};

/// Replaces every corner of a closed polygon by a circular fillet of radius
/// `rho`, sampled so the chord error stays below 1e-6 rho. Throws when a
/// fillet would use more than half of an adjacent edge.
Rounded fillet_round(const PolylineArc& polygon, double rho);

struct TubeCheck {
  bool pass = false;
  double thickness = 0.0;  // min(2 min_rad, dcsd)
  ThicknessMechanism mechanism = ThicknessMechanism::Curvature;
  std::size_t triple_center = 0;
  std::pair<std::size_t, std::size_t> pair{};
};

/// Passes when the discrete thickness of the closed curve reaches `diameter`.
TubeCheck dcsd_tube_check(const PolylineArc& l, double diameter);

}  // namespace ftc
