#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "evigrid/geometry.hpp"

namespace evigrid {

// A hallway testbed: a closed corridor polygon whose edges carry a surface
// material.  The corridor runs along +x with its centerline on y = 0.
struct Environment {
  std::string name;
  std::vector<WallSegment> walls;
  double width = 0.0;   // meters, corridor interior
  double length = 0.0;  // meters

  void validate() const {
    if (!(width > 0.0) || !(length > 0.0)) {
      throw std::invalid_argument("environment dimensions must be positive");
    }
    if (!is_closed_loop(walls)) {
      throw std::invalid_argument("environment walls must form a closed loop");
    }
  }
};

// Rectangular corridor of the given interior size; the two long walls get
// `long_wall_material`, the two end caps stay smooth.
Environment make_corridor(const std::string& name, double width,
                          double length, SurfaceMaterial long_wall_material);

// The three standard testbeds.
Environment narrow_hallway();  // 1.8 x 11.2 m, smooth walls
Environment wide_hallway();    // 2.5 x 14.2 m, smooth walls
Environment window_hallway();  // 2.0 x 27 m, glass long walls

// Look up one of the standard testbeds by name; throws on unknown names.
Environment environment_by_name(const std::string& name);

}  // namespace evigrid
