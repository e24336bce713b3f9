#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <vector>

#include "evigrid/simworld.hpp"
#include "oracles.hpp"

using evigrid::AnomalyParams;
using evigrid::Environment;
using evigrid::Pose;
using evigrid::RangeReading;
using evigrid::Rng;
using evigrid::RunLog;
using evigrid::Scenario;
using evigrid::SensorKind;
using evigrid::Vec2;

namespace {

std::vector<std::array<double, 4>> flat_walls(const Environment& env) {
  std::vector<std::array<double, 4>> out;
  for (const auto& w : env.walls) {
    out.push_back({w.a.x, w.a.y, w.b.x, w.b.y});
  }
  return out;
}

}  // namespace

TEST_CASE("anomaly presets and validation") {
  const AnomalyParams off = AnomalyParams::none();
  CHECK(off.critical_angle == M_PI / 2.0);
  CHECK(off.specular_max_range_prob == 0.0);
  CHECK(off.glass_transmission_prob == 0.0);
  CHECK(off.range_noise_sigma == 0.0);
  CHECK_NOTHROW(off.validate());
  CHECK_NOTHROW(AnomalyParams::defaults().validate());

  AnomalyParams bad = AnomalyParams::defaults();
  bad.specular_max_range_prob = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = AnomalyParams::defaults();
  bad.specular_elongation = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = AnomalyParams::defaults();
  bad.range_noise_sigma = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("rays find the expected hallway walls") {
  const Environment env = evigrid::narrow_hallway();  // 1.8 x 11.2

  const auto up = evigrid::cast_ray(env, {1.0, 0.0}, {0.0, 1.0});
  REQUIRE(up.has_value());
  CHECK(up->distance == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(up->normal.y == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(up->material == evigrid::SurfaceMaterial::smooth);

  const auto down = evigrid::cast_ray(env, {1.0, 0.0}, {0.0, -1.0});
  REQUIRE(down.has_value());
  CHECK(down->distance == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(down->normal.y == doctest::Approx(1.0).epsilon(1e-12));

  const auto forward = evigrid::cast_ray(env, {1.0, 0.0}, {1.0, 0.0});
  REQUIRE(forward.has_value());
  CHECK(forward->distance == doctest::Approx(10.2).epsilon(1e-12));

  const auto back = evigrid::cast_ray(env, {1.0, 0.0}, {-1.0, 0.0});
  REQUIRE(back.has_value());
  CHECK(back->distance == doctest::Approx(1.0).epsilon(1e-12));

  // From outside, pointing away: nothing.
  const auto away = evigrid::cast_ray(env, {-1.0, 0.0}, {-1.0, 0.0});
  CHECK_FALSE(away.has_value());

  const Environment window = evigrid::window_hallway();
  const auto glass = evigrid::cast_ray(window, {5.0, 0.0}, {0.0, 1.0});
  REQUIRE(glass.has_value());
  CHECK(glass->material == evigrid::SurfaceMaterial::glass);
}

TEST_CASE("a pose outside the corridor is rejected") {
  const Environment env = evigrid::narrow_hallway();
  Rng rng(1);
  CHECK_THROWS_AS(evigrid::simulate_sonar_scan(env, {-1.0, 0.0, 0.0},
                                               AnomalyParams::none(), rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(evigrid::simulate_laser_scan(env, {5.0, 3.0, 0.0},
                                               AnomalyParams::none(), rng),
                  std::invalid_argument);
}

TEST_CASE("ideal sonar ranging matches the ray oracle exactly") {
  const Environment env = evigrid::narrow_hallway();
  const auto walls = flat_walls(env);
  Rng rng(42);
  const Pose pose{1.5, 0.0, 0.0};
  const auto scan =
      evigrid::simulate_sonar_scan(env, pose, AnomalyParams::none(), rng);
  REQUIRE(scan.size() == 16);
  for (int k = 0; k < 16; ++k) {
    const RangeReading& r = scan[k];
    CHECK(r.bearing == k * (2.0 * M_PI / 16.0));
    CHECK(r.sensor.x == pose.x);
    const double axis = pose.heading + r.bearing;
    const auto ref = oracle::ray_nearest_segment(
        pose.x, pose.y, std::cos(axis), std::sin(axis), walls);
    REQUIRE(ref.hit);
    if (ref.distance > 3.0) {
      CHECK(r.at_max_range);
      CHECK(r.range == 3.0);
    } else {
      CHECK_FALSE(r.at_max_range);
      CHECK(r.range == ref.distance);  // no noise: bit-exact
    }
  }
  // The perpendicular beams see the walls at exactly half the width.
  CHECK(scan[4].range == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(scan[12].range == doctest::Approx(0.9).epsilon(1e-12));
  // Straight back: the near cap sits 1.5 m behind.
  CHECK_FALSE(scan[8].at_max_range);
  CHECK(scan[8].range == doctest::Approx(1.5).epsilon(1e-12));
  // Straight ahead: the far cap is beyond the sonar's reach.
  CHECK(scan[0].at_max_range);
}

TEST_CASE("ideal laser ranging matches the ray oracle exactly") {
  const Environment env = evigrid::wide_hallway();  // 2.5 x 14.2
  const auto walls = flat_walls(env);
  Rng rng(43);
  const Pose pose{2.0, 0.3, 0.1};
  const auto scan =
      evigrid::simulate_laser_scan(env, pose, AnomalyParams::none(), rng);
  REQUIRE(scan.size() == 181);
  int timeouts = 0;
  for (int k = 0; k <= 180; ++k) {
    const RangeReading& r = scan[k];
    CHECK(r.bearing == (k - 90) * (M_PI / 180.0));
    const double axis = pose.heading + r.bearing;
    const auto ref = oracle::ray_nearest_segment(
        pose.x, pose.y, std::cos(axis), std::sin(axis), walls);
    REQUIRE(ref.hit);
    if (ref.distance > 8.0) {
      CHECK(r.at_max_range);
      CHECK(r.range == 8.0);
      ++timeouts;
    } else {
      CHECK_FALSE(r.at_max_range);
      CHECK(r.range == ref.distance);
    }
  }
  CHECK(timeouts > 0);       // the far cap lies beyond reach
  CHECK(timeouts < 181);     // the side walls are well within it
}

TEST_CASE("grazing sonar incidence loses or stretches the echo") {
  const Environment env = evigrid::narrow_hallway();
  const AnomalyParams anomaly = AnomalyParams::defaults();
  const Pose pose{2.0, 0.0, 0.0};

  int stretched_echoes = 0;
  int grazing_timeouts = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto scan = evigrid::simulate_sonar_scan(env, pose, anomaly, rng);

    // Beam 4 points straight at the wall (incidence 0): always a clean
    // echo around 0.9.
    CHECK_FALSE(scan[4].at_max_range);
    CHECK(scan[4].range == doctest::Approx(0.9).epsilon(0.2));

    // Beam 1 grazes the top wall at 67.5 degrees; the multipath stretch
    // overruns the maximum range, so the echo is always lost.
    CHECK(scan[1].at_max_range);

    // Beam 2 (45 degrees, true distance ~1.27) either times out or comes
    // back stretched by half again.
    const double true_d = 0.9 / std::sin(M_PI / 4.0);
    if (scan[2].at_max_range) {
      ++grazing_timeouts;
    } else {
      ++stretched_echoes;
      CHECK(scan[2].range ==
            doctest::Approx(true_d * 1.5).epsilon(0.1));
    }
  }
  // Both anomaly flavors occur, roughly 40/60.
  CHECK(grazing_timeouts > 40);
  CHECK(stretched_echoes > 60);
  CHECK(grazing_timeouts + stretched_echoes == 200);
}

TEST_CASE("noisy echoes stay near truth and inside the valid interval") {
  const Environment env = evigrid::narrow_hallway();
  const AnomalyParams anomaly = AnomalyParams::defaults();
  Rng rng(777);
  double sum = 0.0;
  int n = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto scan =
        evigrid::simulate_sonar_scan(env, {2.0, 0.0, 0.0}, anomaly, rng);
    for (const RangeReading& r : scan) {
      CHECK(r.range > 0.0);
      CHECK(r.range <= 3.0);
      if (r.at_max_range) CHECK(r.range == 3.0);
    }
    if (!scan[4].at_max_range) {
      sum += scan[4].range;
      ++n;
    }
  }
  REQUIRE(n == 100);
  CHECK(sum / n == doctest::Approx(0.9).epsilon(0.01));  // unbiased noise
}

TEST_CASE("glass transmits most laser beams and reflects the rest") {
  const Environment window = evigrid::window_hallway();
  const AnomalyParams anomaly = AnomalyParams::defaults();
  const Pose pose{5.0, 0.0, 0.0};

  int pass = 0, reflect = 0;
  for (std::uint64_t seed = 1000; seed < 1200; ++seed) {
    Rng rng(seed);
    const auto scan = evigrid::simulate_laser_scan(window, pose, anomaly, rng);
    // The topmost beam hits the glass long wall one meter up; past it
    // there is nothing, so a transmitted beam never returns.
    const RangeReading& top = scan[180];
    if (top.at_max_range) {
      ++pass;
    } else {
      ++reflect;
      CHECK(top.range == doctest::Approx(1.0).epsilon(0.25));
    }
  }
  CHECK(pass + reflect == 200);
  CHECK(pass > 160);     // transmission probability 0.9
  CHECK(reflect > 5);

  // With transmission off, the glass wall behaves like a solid one.
  Rng rng_a(5), rng_b(5);
  const auto treated =
      evigrid::simulate_laser_scan(window, pose, AnomalyParams::none(), rng_a);
  const Environment solid =
      evigrid::make_corridor("solid", 2.0, 27.0,
                             evigrid::SurfaceMaterial::smooth);
  const auto smooth =
      evigrid::simulate_laser_scan(solid, pose, AnomalyParams::none(), rng_b);
  REQUIRE(treated.size() == smooth.size());
  for (std::size_t i = 0; i < treated.size(); ++i) {
    CHECK(treated[i].range == smooth[i].range);
    CHECK(treated[i].at_max_range == smooth[i].at_max_range);
  }
}

TEST_CASE("a run drives six meters in sixty steps") {
  Scenario sc;
  sc.environment = "narrow";
  sc.sensor = SensorKind::sonar;
  sc.seed = 7;
  const RunLog log = evigrid::generate_run(sc);
  REQUIRE(log.records.size() == 60);
  CHECK(log.records.front().distance == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(log.records.back().distance == 6.0);
  CHECK(log.records.back().pose.x == 7.0);
  for (const auto& rec : log.records) {
    CHECK(rec.readings.size() == 16);
    CHECK(rec.pose.y == 0.0);
    CHECK(rec.pose.heading == 0.0);
    for (const RangeReading& r : rec.readings) {
      CHECK(r.range > 0.0);
      CHECK(r.range <= 3.0);
      CHECK(r.sensor.x == rec.pose.x);
    }
  }

  Scenario laser = sc;
  laser.sensor = SensorKind::laser;
  laser.environment = "window";
  const RunLog llog = evigrid::generate_run(laser);
  REQUIRE(llog.records.size() == 60);
  CHECK(llog.records.front().readings.size() == 181);
}

TEST_CASE("runs are reproducible and seeds matter") {
  Scenario sc;
  sc.environment = "wide";
  sc.sensor = SensorKind::sonar;
  sc.seed = 99;
  const RunLog a = evigrid::generate_run(sc);
  const RunLog b = evigrid::generate_run(sc);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    for (std::size_t j = 0; j < a.records[i].readings.size(); ++j) {
      REQUIRE(a.records[i].readings[j].range ==
              b.records[i].readings[j].range);
      REQUIRE(a.records[i].readings[j].at_max_range ==
              b.records[i].readings[j].at_max_range);
    }
  }

  sc.seed = 100;
  const RunLog c = evigrid::generate_run(sc);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.records.size() && !any_difference; ++i) {
    for (std::size_t j = 0; j < a.records[i].readings.size(); ++j) {
      if (a.records[i].readings[j].range != c.records[i].readings[j].range) {
        any_difference = true;
        break;
      }
    }
  }
  CHECK(any_difference);
}

TEST_CASE("run logs survive a disk round trip bit for bit") {
  Scenario sc;
  sc.environment = "window";
  sc.sensor = SensorKind::laser;
  sc.seed = 31337;
  const RunLog out = evigrid::generate_run(sc);
  const std::string path = "test_simworld_log.jsonl";
  evigrid::write_runlog(path, out);
  const RunLog in = evigrid::read_runlog(path);

  CHECK(in.scenario.environment == out.scenario.environment);
  CHECK(in.scenario.sensor == out.scenario.sensor);
  CHECK(in.scenario.seed == out.scenario.seed);
  CHECK(in.scenario.anomalies == out.scenario.anomalies);
  CHECK(in.scenario.start_x == out.scenario.start_x);
  CHECK(in.scenario.step == out.scenario.step);
  REQUIRE(in.records.size() == out.records.size());
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    REQUIRE(in.records[i].distance == out.records[i].distance);
    REQUIRE(in.records[i].pose.x == out.records[i].pose.x);
    REQUIRE(in.records[i].readings.size() == out.records[i].readings.size());
    for (std::size_t j = 0; j < out.records[i].readings.size(); ++j) {
      const RangeReading& x = out.records[i].readings[j];
      const RangeReading& y = in.records[i].readings[j];
      REQUIRE(y.bearing == x.bearing);
      REQUIRE(y.range == x.range);
      REQUIRE(y.at_max_range == x.at_max_range);
      REQUIRE(y.sensor.x == x.sensor.x);
    }
  }
  std::remove(path.c_str());

  CHECK_THROWS_AS(evigrid::read_runlog("no_such_file.jsonl"),
                  std::runtime_error);
}

TEST_CASE("scenario validation") {
  Scenario sc;
  sc.environment = "atlantis";
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc = Scenario{};
  sc.scan_count = 0;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc = Scenario{};
  sc.step = -0.1;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  CHECK_NOTHROW(Scenario{}.validate());
}
