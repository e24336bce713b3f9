#include "evigrid/environment.hpp"

namespace evigrid {

Environment make_corridor(const std::string& name, double width,
                          double length, SurfaceMaterial long_wall_material) {
  Environment env;
  env.name = name;
  env.width = width;
  env.length = length;
  const double half = width / 2.0;
  // Counter-clockwise loop: bottom wall, far cap, top wall, near cap.
  env.walls = {
      {{0.0, -half}, {length, -half}, long_wall_material},
      {{length, -half}, {length, half}, SurfaceMaterial::smooth},
      {{length, half}, {0.0, half}, long_wall_material},
      {{0.0, half}, {0.0, -half}, SurfaceMaterial::smooth},
  };
  return env;
}

Environment narrow_hallway() {
  return make_corridor("narrow", 1.8, 11.2, SurfaceMaterial::smooth);
}

Environment wide_hallway() {
  return make_corridor("wide", 2.5, 14.2, SurfaceMaterial::smooth);
}

Environment window_hallway() {
  return make_corridor("window", 2.0, 27.0, SurfaceMaterial::glass);
}

Environment environment_by_name(const std::string& name) {
  if (name == "narrow") return narrow_hallway();
  if (name == "wide") return wide_hallway();
  if (name == "window") return window_hallway();
  throw std::invalid_argument("unknown environment: " + name);
}

}  // namespace evigrid
