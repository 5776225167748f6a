#pragma once

#include <cstdint>
#include <functional>

#include "ftc/graph.hpp"

namespace ftc::shapes {

/// Closed polygon sampling `f` at n equally spaced parameters of [0, 2 pi).
EmbeddedGraph sampled_loop(const std::function<Point(double)>& f, int n);

EmbeddedGraph square_loop(double side = 1.0);
/// Regular n-gon inscribed in the circle of radius r in the xy-plane.
EmbeddedGraph circle_loop(int n, double r = 1.0);
/// Stadium: two half circles of radius width/2 joined by straight sides, with
/// total extent `length`. Sides are split into pieces of the cap chord length.
EmbeddedGraph stadium_loop(double length, double width, int cap_segments);

/// (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t)
EmbeddedGraph trefoil_loop(int n);
/// ((2 + cos 2t) cos 3t, (2 + cos 2t) sin 3t, sin 4t)
EmbeddedGraph figure_eight_loop(int n);
/// Two round unit circles, each through the other's center.
EmbeddedGraph hopf_link(int n);
/// Two curves on a torus, each winding once around the core and twice around the tube.
EmbeddedGraph torus_link_2_4(int n);
/// Vertices at (-1,0,0) and (1,0,0) joined by a straight arc and two circular
/// arcs bulging to +y and -y with the given half opening angle.
EmbeddedGraph theta_graph(int n, double half_angle);
/// Two straight open strands parallel to x, `gap` apart, each of the given length.
EmbeddedGraph parallel_strands(double gap, double length);

/// Moves every point (vertices consistently) by a uniform random vector of
/// length at most `amplitude`.
EmbeddedGraph perturbed(const EmbeddedGraph& g, double amplitude, std::uint64_t seed);

/// Replaces segment `index` of a single-loop graph by a small knotted arc of
/// the given size (a local trefoil summand).
EmbeddedGraph with_local_trefoil(const EmbeddedGraph& loop, std::size_t index, double size);

/// Random rotation plus translation.
struct RigidMotion {
  Vec3 axis{0, 0, 1};
  double angle = 0.0;
  Vec3 shift{};
  Point operator()(const Point& p) const { return rotate(p, axis, angle) + shift; }
  static RigidMotion random(std::uint64_t seed, double shift_scale = 10.0);
};

}  // namespace ftc::shapes
