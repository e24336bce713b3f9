#include "evigrid/sensor_model.hpp"

#include <algorithm>
#include <cmath>

namespace evigrid {

SensorModelParams sonar_model_defaults() {
  SensorModelParams p;
  p.max_range = 3.0;
  p.half_angle = 15.0 * M_PI / 180.0;
  p.max_occupied_mass = 0.98;
  p.range_tolerance = 0.1437;
  p.kind = SensorKind::sonar;
  return p;
}

SensorModelParams laser_model_defaults() {
  SensorModelParams p;
  p.max_range = 8.0;
  p.half_angle = 0.5 * M_PI / 180.0;  // half the 1-degree beam spacing
  p.max_occupied_mass = 0.98;
  p.range_tolerance = 0.1437;
  p.kind = SensorKind::laser;
  return p;
}

BeliefMass evidence_for_cell(double r, double alpha, double d,
                             const SensorModelParams& params) {
  params.validate();
  const double R = params.max_range;
  const double beta = params.half_angle;
  if (!(r > 0.0) || !(r <= R) || !(std::abs(alpha) <= beta) || !(d > 0.0) ||
      !(d <= R)) {
    throw std::domain_error("cell outside the sensor cone or range window");
  }
  const double angular =
      beta > 0.0 ? (beta - std::abs(alpha)) / beta : 1.0;
  const double radial = (R - r) / R;
  BeliefMass m = BeliefMass::vacuous();
  if (std::abs(r - d) <= params.range_tolerance) {
    const double occ = 0.5 * (radial + angular) * params.max_occupied_mass;
    m.occupied = occ;
    m.unknown = 1.0 - occ;
  } else if (r < d - params.range_tolerance) {
    const double emp = 0.5 * (radial + angular);
    m.empty = emp;
    m.unknown = 1.0 - emp;
  }
  return m;
}

std::vector<FootprintCell> cells_in_footprint(const RangeReading& reading,
                                              const SensorModelParams& params,
                                              const GridSpec& grid) {
  params.validate();
  grid.validate();
  std::vector<FootprintCell> out;
  const Vec2 p{reading.sensor.x, reading.sensor.y};
  if (!grid.contains(p.x, p.y)) return out;

  const double R = params.max_range;
  const double beta = params.half_angle;
  const double d = reading.range;
  double limit;  // radial reach of the footprint
  bool exclusive_limit;
  if (reading.at_max_range) {
    limit = d - params.range_tolerance;
    exclusive_limit = true;
  } else {
    limit = std::min(d + params.range_tolerance, R);
    exclusive_limit = false;
  }
  if (!(limit > 0.0)) return out;

  const double axis = reading.sensor.heading + reading.bearing;

  // Bounding box of the circular sector: apex, both arc endpoints, and the
  // axis-aligned extremes whenever the sector sweeps across them.
  double bx_min = p.x, bx_max = p.x, by_min = p.y, by_max = p.y;
  auto extend = [&](double ang) {
    const double x = p.x + limit * std::cos(ang);
    const double y = p.y + limit * std::sin(ang);
    bx_min = std::min(bx_min, x);
    bx_max = std::max(bx_max, x);
    by_min = std::min(by_min, y);
    by_max = std::max(by_max, y);
  };
  extend(axis - beta);
  extend(axis + beta);
  for (int q = -4; q <= 4; ++q) {
    const double cardinal = q * M_PI / 2.0;
    if (std::abs(wrap_angle(cardinal - axis)) <= beta) extend(cardinal);
  }

  // Pad the box by a hair so cells whose centers sit exactly on the cone
  // boundary cannot be lost to rounding; the exact tests below decide.
  const double pad = 1e-9;
  bx_min -= pad;
  by_min -= pad;
  bx_max += pad;
  by_max += pad;

  const int n = grid.cells_per_side();
  const double cs = grid.cell_size;
  int ix0 = std::max(0, static_cast<int>(std::floor((bx_min - grid.min_x()) / cs)));
  int iy0 = std::max(0, static_cast<int>(std::floor((by_min - grid.min_y()) / cs)));
  int ix1 = std::min(n - 1, static_cast<int>(std::floor((bx_max - grid.min_x()) / cs)));
  int iy1 = std::min(n - 1, static_cast<int>(std::floor((by_max - grid.min_y()) / cs)));

  for (int iy = iy0; iy <= iy1; ++iy) {
    const double cy = grid.center_y(iy);
    for (int ix = ix0; ix <= ix1; ++ix) {
      const double cx = grid.center_x(ix);
      const double dx = cx - p.x;
      const double dy = cy - p.y;
      const double r = std::hypot(dx, dy);
      if (!(r > 0.0)) continue;  // the sensor's own cell center
      if (exclusive_limit ? r >= limit : r > limit) continue;
      const double alpha = wrap_angle(std::atan2(dy, dx) - axis);
      if (std::abs(alpha) > beta) continue;
      out.push_back(FootprintCell{ix, iy, r, alpha});
    }
  }
  return out;
}

}  // namespace evigrid
