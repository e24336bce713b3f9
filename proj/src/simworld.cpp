#include "evigrid/simworld.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace evigrid {

AnomalyParams AnomalyParams::none() {
  AnomalyParams p;
  p.critical_angle = M_PI / 2.0;  // no incidence can exceed it
  p.specular_max_range_prob = 0.0;
  p.glass_transmission_prob = 0.0;
  p.range_noise_sigma = 0.0;
  return p;
}

void AnomalyParams::validate() const {
  if (!(critical_angle > 0.0) || critical_angle > M_PI ||
      specular_max_range_prob < 0.0 || specular_max_range_prob > 1.0 ||
      !(specular_elongation >= 1.0) || glass_transmission_prob < 0.0 ||
      glass_transmission_prob > 1.0 || !(range_noise_sigma >= 0.0)) {
    throw std::invalid_argument("invalid anomaly parameters");
  }
}

std::optional<RayHitInfo> cast_ray(const Environment& env, Vec2 origin,
                                   Vec2 direction) {
  const auto hit = intersect_ray(origin, direction, env.walls);
  if (!hit) return std::nullopt;
  RayHitInfo info;
  info.distance = hit->distance;
  info.normal = hit->normal;
  info.material = env.walls[hit->segment_index].material;
  info.segment_index = static_cast<int>(hit->segment_index);
  return info;
}

namespace {

constexpr double kMinEchoRange = 1e-6;

void require_pose_inside(const Environment& env, const Pose& pose) {
  if (!point_in_polygon({pose.x, pose.y}, env.walls)) {
    throw std::invalid_argument("sensor pose lies outside the corridor");
  }
}

RangeReading timeout_reading(const Pose& pose, double bearing,
                             double max_range) {
  return RangeReading{pose, bearing, max_range, true};
}

RangeReading echo_reading(const Pose& pose, double bearing, double distance,
                          const AnomalyParams& anomaly, double max_range,
                          Rng& rng) {
  double r = distance;
  if (anomaly.range_noise_sigma > 0.0) {
    r += rng.normal(0.0, anomaly.range_noise_sigma);
  }
  r = std::clamp(r, kMinEchoRange, max_range);
  return RangeReading{pose, bearing, r, false};
}

}  // namespace

std::vector<RangeReading> simulate_sonar_scan(const Environment& env,
                                              const Pose& pose,
                                              const AnomalyParams& anomaly,
                                              Rng& rng, double max_range) {
  env.validate();
  anomaly.validate();
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("max range must be positive");
  }
  require_pose_inside(env, pose);

  std::vector<RangeReading> scan;
  scan.reserve(16);
  for (int beam = 0; beam < 16; ++beam) {
    const double bearing = beam * (2.0 * M_PI / 16.0);
    const double axis = pose.heading + bearing;
    const Vec2 dir{std::cos(axis), std::sin(axis)};
    const auto hit = cast_ray(env, {pose.x, pose.y}, dir);
    if (!hit || hit->distance > max_range) {
      scan.push_back(timeout_reading(pose, bearing, max_range));
      continue;
    }
    // Incidence relative to the surface normal: 0 means head-on.
    const double facing = std::clamp(-dir.dot(hit->normal), -1.0, 1.0);
    const double incidence = std::acos(facing);
    if (incidence > anomaly.critical_angle) {
      // The main echo bounces away.  Either nothing returns before the
      // timeout, or a multipath echo arrives late and elongated.
      if (rng.uniform01() < anomaly.specular_max_range_prob) {
        scan.push_back(timeout_reading(pose, bearing, max_range));
        continue;
      }
      const double stretched = hit->distance * anomaly.specular_elongation;
      if (stretched >= max_range) {
        scan.push_back(timeout_reading(pose, bearing, max_range));
        continue;
      }
      scan.push_back(
          echo_reading(pose, bearing, stretched, anomaly, max_range, rng));
      continue;
    }
    scan.push_back(
        echo_reading(pose, bearing, hit->distance, anomaly, max_range, rng));
  }
  return scan;
}

std::vector<RangeReading> simulate_laser_scan(const Environment& env,
                                              const Pose& pose,
                                              const AnomalyParams& anomaly,
                                              Rng& rng, double max_range) {
  env.validate();
  anomaly.validate();
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("max range must be positive");
  }
  require_pose_inside(env, pose);

  std::vector<RangeReading> scan;
  scan.reserve(181);
  for (int beam = 0; beam <= 180; ++beam) {
    const double bearing = (beam - 90) * (M_PI / 180.0);
    const double axis = pose.heading + bearing;
    const Vec2 dir{std::cos(axis), std::sin(axis)};

    Vec2 origin{pose.x, pose.y};
    double traveled = 0.0;
    std::size_t skip = static_cast<std::size_t>(-1);
    bool resolved = false;
    // Glass lets the beam through most of the time; keep casting past
    // transparent walls until something returns or the budget runs out.
    while (!resolved) {
      const auto hit = intersect_ray(origin, dir, env.walls, skip);
      if (!hit || traveled + hit->distance > max_range) {
        scan.push_back(timeout_reading(pose, bearing, max_range));
        resolved = true;
        break;
      }
      const bool transmits =
          env.walls[hit->segment_index].material == SurfaceMaterial::glass &&
          rng.uniform01() < anomaly.glass_transmission_prob;
      if (transmits) {
        traveled += hit->distance;
        origin = hit->point;
        skip = hit->segment_index;
        continue;
      }
      scan.push_back(echo_reading(pose, bearing, traveled + hit->distance,
                                  anomaly, max_range, rng));
      resolved = true;
    }
  }
  return scan;
}

void Scenario::validate() const {
  environment_by_name(environment);  // throws on unknown names
  if (!(start_x > 0.0) || !(step > 0.0) || scan_count < 1) {
    throw std::invalid_argument("invalid scenario geometry");
  }
}

RunLog generate_run(const Scenario& scenario) {
  const AnomalyParams anomaly =
      scenario.anomalies ? AnomalyParams::defaults() : AnomalyParams::none();
  const double max_range = scenario.sensor == SensorKind::sonar
                               ? sonar_model_defaults().max_range
                               : laser_model_defaults().max_range;
  return generate_run(scenario, anomaly, max_range);
}

RunLog generate_run(const Scenario& scenario, const AnomalyParams& anomaly,
                    double max_range) {
  scenario.validate();
  const Environment env = environment_by_name(scenario.environment);

  Rng rng(mix_seed(scenario.seed,
                   scenario.sensor == SensorKind::sonar ? 0x536f6e61 : 0x4c617365));

  RunLog log;
  log.scenario = scenario;
  log.records.reserve(static_cast<std::size_t>(scenario.scan_count));
  for (int i = 1; i <= scenario.scan_count; ++i) {
    ScanRecord rec;
    rec.distance = i * scenario.step;
    rec.pose = Pose{scenario.start_x + rec.distance, 0.0, 0.0};
    rec.readings =
        scenario.sensor == SensorKind::sonar
            ? simulate_sonar_scan(env, rec.pose, anomaly, rng, max_range)
            : simulate_laser_scan(env, rec.pose, anomaly, rng, max_range);
    log.records.push_back(std::move(rec));
  }
  return log;
}

const char* sensor_kind_name(SensorKind kind) {
  return kind == SensorKind::sonar ? "sonar" : "laser";
}

SensorKind sensor_kind_by_name(const std::string& name) {
  if (name == "sonar") return SensorKind::sonar;
  if (name == "laser") return SensorKind::laser;
  throw std::invalid_argument("unknown sensor kind: " + name);
}

void write_runlog(const std::string& path, const RunLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  nlohmann::json header;
  header["type"] = "evigrid-run";
  header["environment"] = log.scenario.environment;
  header["sensor"] = sensor_kind_name(log.scenario.sensor);
  header["seed"] = log.scenario.seed;
  header["anomalies"] = log.scenario.anomalies;
  header["start_x"] = log.scenario.start_x;
  header["step"] = log.scenario.step;
  header["scan_count"] = log.scenario.scan_count;
  out << header.dump() << '\n';

  for (const ScanRecord& rec : log.records) {
    nlohmann::json line;
    line["d"] = rec.distance;
    line["pose"] = {rec.pose.x, rec.pose.y, rec.pose.heading};
    nlohmann::json beams = nlohmann::json::array();
    for (const RangeReading& r : rec.readings) {
      beams.push_back({r.bearing, r.range, r.at_max_range});
    }
    line["beams"] = std::move(beams);
    out << line.dump() << '\n';
  }
  if (!out) throw std::runtime_error("short write: " + path);
}

RunLog read_runlog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty run log: " + path);
  }
  const nlohmann::json header = nlohmann::json::parse(line);
  if (header.value("type", "") != "evigrid-run") {
    throw std::runtime_error("not a run log: " + path);
  }

  RunLog log;
  log.scenario.environment = header.at("environment").get<std::string>();
  log.scenario.sensor =
      sensor_kind_by_name(header.at("sensor").get<std::string>());
  log.scenario.seed = header.at("seed").get<std::uint64_t>();
  log.scenario.anomalies = header.at("anomalies").get<bool>();
  log.scenario.start_x = header.at("start_x").get<double>();
  log.scenario.step = header.at("step").get<double>();
  log.scenario.scan_count = header.at("scan_count").get<int>();

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    ScanRecord rec;
    rec.distance = j.at("d").get<double>();
    const auto& pose = j.at("pose");
    rec.pose = Pose{pose.at(0).get<double>(), pose.at(1).get<double>(),
                    pose.at(2).get<double>()};
    for (const auto& beam : j.at("beams")) {
      RangeReading r;
      r.sensor = rec.pose;
      r.bearing = beam.at(0).get<double>();
      r.range = beam.at(1).get<double>();
      r.at_max_range = beam.at(2).get<bool>();
      rec.readings.push_back(r);
    }
    log.records.push_back(std::move(rec));
  }
  if (static_cast<int>(log.records.size()) != log.scenario.scan_count) {
    throw std::runtime_error("run log record count mismatch: " + path);
  }
  return log;
}

}  // namespace evigrid
