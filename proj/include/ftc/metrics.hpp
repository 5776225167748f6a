#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ftc/graph.hpp"

namespace ftc {

/// Pairs one arc of the source graph with one arc of the target graph.
/// `reversed` means the target arc is traversed tail-to-head.
struct ArcPairing {
  ArcId source = 0;
  ArcId target = 0;
  bool reversed = false;
};

/// Strictly increasing piecewise-linear map between arclength fractions,
/// anchored at (0,0) and (1,1).
class ParameterMap {
public:
  ParameterMap();
  explicit ParameterMap(std::vector<std::pair<double, double>> breakpoints);

  double forward(double s) const;
  double inverse(double s2) const;
  ParameterMap inverted() const;
  const std::vector<std::pair<double, double>>& breakpoints() const { return bp_; }

private:
  std::vector<std::pair<double, double>> bp_;
};

struct ArcCorrespondence {
  ArcPairing pairing;
  ParameterMap map;
};

struct Correspondence {
  std::vector<ArcCorrespondence> arcs;
  bool refined = false;

  /// Correspondence from the target graph back to the source.
  Correspondence inverse() const;
  const ArcCorrespondence& for_source(ArcId source) const;
};

/// Default pairing: arcs with equal ids, otherwise arcs in storage order.
std::vector<ArcPairing> default_pairing(const EmbeddedGraph& g, const EmbeddedGraph& g2);

/// Proportional-arclength correspondence. Throws if the pairing does not
/// induce a combinatorial isomorphism.
Correspondence default_correspondence(const EmbeddedGraph& g, const EmbeddedGraph& g2,
                                      const std::vector<ArcPairing>& pairing);
Correspondence default_correspondence(const EmbeddedGraph& g, const EmbeddedGraph& g2);

/// Pairs the i-th point of each source arc with the i-th point of its
/// target arc (requires equal point counts).
Correspondence index_correspondence(const EmbeddedGraph& g, const EmbeddedGraph& g2);

struct ClosenessWitness {
  ArcId arc = 0;
  double s = 0.0;  // source arclength fraction
  Point source_point;
  Point target_point;
};

struct ClosenessReport {
  double delta = 0.0;
  double theta = 0.0;
  ClosenessWitness delta_witness;
  ClosenessWitness theta_witness;
};

/// Target-side polyline of a pairing (reversed when requested).
PolylineArc paired_target_curve(const EmbeddedGraph& g2, const ArcPairing& p);

/// Exact sup distance and essential-sup tangent angle under `c`. Both
/// curves are linear in the merged breakpoints, so the maxima are attained
/// on that finite set.
ClosenessReport measure_closeness(const EmbeddedGraph& g, const EmbeddedGraph& g2, const Correspondence& c);

/// Closeness restricted to one arc pair.
ClosenessReport measure_arc_closeness(const PolylineArc& a, const PolylineArc& b, const ParameterMap& map, ArcId id);

/// Discrete-Frechet refinement of the parameter maps. Never increases the
/// measured delta of any arc pair.
Correspondence refine_correspondence(const EmbeddedGraph& g, const EmbeddedGraph& g2, const Correspondence& c);

enum class ThicknessMechanism { Curvature, SelfDistance };

struct ThicknessReport {
  double tau_hat = 0.0;
  double min_rad = 0.0;
  double dcsd = 0.0;
  ThicknessMechanism mechanism = ThicknessMechanism::Curvature;
  std::size_t triple_center = 0;              // middle index of the minimal triple
  std::pair<std::size_t, std::size_t> pair{};  // doubly-critical witness
};

/// Circumradius of three points (infinity when collinear).
double circumradius(const Point& a, const Point& b, const Point& c);

/// Discrete thickness surrogate of a closed polyline:
/// min(2 * min consecutive-triple circumradius, doubly-critical self distance).
ThicknessReport discrete_thickness(const PolylineArc& loop);

/// Supremal arc/chord ratio over point pairs (shorter arc for loops).
double distortion(const PolylineArc& arc);

/// Largest dyadic scale L/2^k (k = 0..20) at which every subarc no longer
/// than the scale keeps all its segment directions within `theta` of its
/// chord. Subarc endpoints range over points and segment midpoints.
double chord_angle_modulus(const PolylineArc& arc, double theta);

}  // namespace ftc
