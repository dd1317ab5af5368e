// Writes the 64x64 synthetic city used by the tests as a ready-to-run project.
#include <CLI11.hpp>

#include <iostream>

#include "sleuth/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"write a synthetic city project"};
  std::string dir = "fixture";
  sleuth::synthetic::CitySpec spec;
  app.add_option("dir", dir, "output directory");
  app.add_option("--seed", spec.seed, "seed for villages and the simulated history");
  app.add_option("--size", spec.size, "grid side length");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto stack = sleuth::synthetic::make_city(spec);
    const auto ini = sleuth::synthetic::write_project(stack, dir,
                                                      "[forecast]\nyears = 20\nmc = 25\n\n[output]\ndirectory = out\n");
    std::cout << ini.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
