#pragma once

#include <vector>

#include "evigrid/belief.hpp"
#include "evigrid/geometry.hpp"
#include "evigrid/grid_spec.hpp"

namespace evigrid {

enum class SensorKind { sonar, laser };

// Cone-shaped range sensor described by its maximum range R, half-angle
// beta, the occupancy mass ceiling for a hit, and the radial tolerance that
// widens the hit arc (defaults to one grid cell diagonal).
struct SensorModelParams {
  double max_range = 3.0;
  double half_angle = 0.2617993877991494;  // 15 degrees
  double max_occupied_mass = 0.98;
  double range_tolerance = 0.1437;
  SensorKind kind = SensorKind::sonar;

  void validate() const {
    if (!(max_range > 0.0) || !(half_angle >= 0.0) ||
        !(max_occupied_mass > 0.0) || max_occupied_mass > 1.0 ||
        !(range_tolerance >= 0.0)) {
      throw std::invalid_argument("invalid sensor model parameters");
    }
  }
};

SensorModelParams sonar_model_defaults();
SensorModelParams laser_model_defaults();

// One beam measurement: the sensor pose, the beam bearing relative to the
// sensor heading, and the measured range.  at_max_range marks a timeout
// (no echo came back), in which case range holds the maximum range.
struct RangeReading {
  Pose sensor;
  double bearing = 0.0;
  double range = 0.0;
  bool at_max_range = false;
};

// A grid cell touched by a beam, with its polar coordinates in the beam
// frame: distance from the sensor and angular offset from the beam axis.
struct FootprintCell {
  int ix = 0;
  int iy = 0;
  double range = 0.0;
  double bearing_offset = 0.0;
};

// Cells whose centers lie inside the beam cone, radially limited to
// min(d + tolerance, R) for an echo and to d - tolerance (exclusive) for a
// timeout, which carries no hit arc.  A sensor pose outside the grid
// yields an empty footprint.  Order is row-major and deterministic.
std::vector<FootprintCell> cells_in_footprint(const RangeReading& reading,
                                              const SensorModelParams& params,
                                              const GridSpec& grid);

// Two-region evidence for a cell at beam-frame polar position (r, alpha)
// given measured range d.  Cells on the hit arc (|r - d| <= tolerance)
// receive occupied mass scaled by proximity and axial alignment; cells
// strictly inside the cone before the arc receive empty mass; anything
// else is vacuous.  Preconditions (0 < r <= R, |alpha| <= beta,
// 0 < d <= R) violations throw std::domain_error.
BeliefMass evidence_for_cell(double r, double alpha, double d,
                             const SensorModelParams& params);

}  // namespace evigrid
