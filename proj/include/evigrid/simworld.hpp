#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evigrid/environment.hpp"
#include "evigrid/rng.hpp"
#include "evigrid/sensor_model.hpp"

namespace evigrid {

// Knobs of the simulated measurement pathologies.  The `none` preset
// disables every one of them, leaving ideal geometric ranging.
struct AnomalyParams {
  double critical_angle = 0.5235987755982988;  // 30 deg; beyond it, sonar
                                               // echoes go astray
  double specular_max_range_prob = 0.4;  // grazing sonar: lost echo share
  double specular_elongation = 1.5;      // grazing sonar: multipath factor
  double glass_transmission_prob = 0.9;  // laser passes a glass wall
  double range_noise_sigma = 0.02;       // echo noise, meters

  static AnomalyParams defaults() { return AnomalyParams{}; }
  static AnomalyParams none();
  void validate() const;  // throws std::invalid_argument
};

struct RayHitInfo {
  double distance = 0.0;
  Vec2 normal;
  SurfaceMaterial material = SurfaceMaterial::smooth;
  int segment_index = -1;
};

// Nearest wall along a ray, or nothing when the ray escapes the loop.
std::optional<RayHitInfo> cast_ray(const Environment& env, Vec2 origin,
                                   Vec2 direction);

// One sonar sweep: 16 beams, 22.5 degrees apart, starting at the sensor
// heading.  Grazing incidence beyond the critical angle loses the echo to
// a timeout or stretches it by the multipath factor; echoes carry
// Gaussian range noise.  Throws std::invalid_argument when the pose lies
// outside the corridor.
std::vector<RangeReading> simulate_sonar_scan(const Environment& env,
                                              const Pose& pose,
                                              const AnomalyParams& anomaly,
                                              Rng& rng,
                                              double max_range = 3.0);

// One laser sweep: 181 beams, 1 degree apart, spanning the half circle
// ahead of the sensor heading.  Each glass wall on the path transmits the
// beam with the configured probability; echoes carry Gaussian noise.
std::vector<RangeReading> simulate_laser_scan(const Environment& env,
                                              const Pose& pose,
                                              const AnomalyParams& anomaly,
                                              Rng& rng,
                                              double max_range = 8.0);

// A recorded data-collection pass: the robot enters a hallway and drives
// straight down the centerline, scanning at fixed intervals.
struct Scenario {
  std::string environment = "narrow";
  SensorKind sensor = SensorKind::sonar;
  std::uint64_t seed = 1;
  bool anomalies = true;
  double start_x = 1.0;
  double step = 0.1;
  int scan_count = 60;

  void validate() const;  // throws std::invalid_argument
};

struct ScanRecord {
  double distance = 0.0;  // traveled since start_x
  Pose pose;
  std::vector<RangeReading> readings;
};

struct RunLog {
  Scenario scenario;
  std::vector<ScanRecord> records;
};

// Presets: anomalies on means AnomalyParams::defaults(), off means
// AnomalyParams::none(); the range limit comes from the sensor's default
// model.  The overload takes both explicitly.
RunLog generate_run(const Scenario& scenario);
RunLog generate_run(const Scenario& scenario, const AnomalyParams& anomaly,
                    double max_range);

// JSON-lines serialization: a header line followed by one line per scan.
void write_runlog(const std::string& path, const RunLog& log);
RunLog read_runlog(const std::string& path);

const char* sensor_kind_name(SensorKind kind);
SensorKind sensor_kind_by_name(const std::string& name);  // throws

}  // namespace evigrid
