// Regenerates the graph files under fixtures/.
#include <filesystem>
#include <iostream>

#include "ftc/certify.hpp"
#include "ftc/io.hpp"
#include "ftc/shapes.hpp"

using namespace ftc;

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);
  auto save = [&](const std::string& name, const EmbeddedGraph& g) {
    g.validate(true);
    write_text_file((dir / (name + ".graph")).string(), serialize_graph(g, "unitless"));
    std::cout << name << '\n';
  };

  save("square", shapes::square_loop());
  for (int n : {64, 256, 1024}) save("circle_" + std::to_string(n), shapes::circle_loop(n));
  save("circle_64_far", shapes::circle_loop(64).transformed([](const Point& p) { return p + Vec3{10, 0, 0}; }));

  const auto trefoil = shapes::trefoil_loop(200);
  const double delta = build_ftc_model(trefoil, 0.1).second.chain.delta;
  save("trefoil", trefoil);
  save("trefoil_perturbed", shapes::perturbed(trefoil, 0.4 * delta, 1));
  save("figure_eight", shapes::figure_eight_loop(160));
  save("hopf", shapes::hopf_link(64));
  save("torus_link", shapes::torus_link_2_4(96));
  save("theta", shapes::theta_graph(24, kPi / 20));
  return 0;
}
