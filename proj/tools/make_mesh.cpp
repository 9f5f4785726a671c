// Writes example meshes in the ASCII `v`/`f` format read by beamkit.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "beamkit/io.hpp"
#include "beamkit/mesh.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate closed triangle meshes", "beamkit-mesh"};
  app.require_subcommand(1);
  std::string out_path;

  int subdivisions = 3;
  double radius = 1.0;
  auto* ico = app.add_subcommand("icosphere", "icosahedral sphere, 20 * 4^s triangles");
  ico->add_option("--subdivisions", subdivisions)->check(CLI::Range(0, 6));
  ico->add_option("--radius", radius)->check(CLI::PositiveNumber);
  ico->add_option("--out", out_path)->required();

  double cyl_radius = 0.035;
  double height = 0.130;
  double cap_radius = 0.1515;
  double edge = 0.007;
  auto* cyl = app.add_subcommand("capped-cylinder", "cylinder with a spherical top cap, apex at the origin");
  cyl->add_option("--radius", cyl_radius)->check(CLI::PositiveNumber);
  cyl->add_option("--height", height)->check(CLI::PositiveNumber);
  cyl->add_option("--cap-radius", cap_radius)->check(CLI::PositiveNumber);
  cyl->add_option("--edge", edge, "target edge length")->check(CLI::PositiveNumber);
  cyl->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);
  try {
    const beamkit::TriMesh mesh = ico->parsed() ? beamkit::make_icosphere(subdivisions, radius)
                                                : beamkit::make_capped_cylinder(cyl_radius, height, cap_radius, edge);
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << '\n';
      return 1;
    }
    beamkit::write_mesh(out, mesh);
    std::cout << mesh.size() << " triangles, longest edge " << mesh.max_edge_length() << " m -> " << out_path << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
