#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evigrid/indicators.hpp"
#include "evigrid/metrics.hpp"
#include "evigrid/sensor_model.hpp"
#include "evigrid/simworld.hpp"

namespace evigrid {

std::vector<double> default_sample_distances();  // 1.0, 1.5, ..., 5.5

// Everything the batch protocol needs: which runs to simulate, how to
// grid and replay them, where to sample, which indicator configs to
// score, and how to judge the results.  Loadable from JSON; every field
// has a sensible default, so {} is a valid config file.
struct ExperimentConfig {
  std::vector<std::string> environments{"narrow", "wide", "window"};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<SensorKind> sensors{SensorKind::sonar, SensorKind::laser};
  bool anomalies = true;

  // Run shape (see Scenario): poses at start_x + i*step for i = 1..count.
  double start_x = 1.0;
  double step = 0.1;
  int scan_count = 60;

  double grid_side_length = 28.0;
  double grid_cell_size = 0.1016;

  SensorModelParams sonar_params = sonar_model_defaults();
  SensorModelParams laser_params = laser_model_defaults();
  AnomalyParams anomaly = AnomalyParams::defaults();  // when anomalies is true

  // Grid states are scored after the scan that reaches each distance.
  std::vector<double> sample_distances = default_sample_distances();

  // Empty means every kind; otherwise a whitelist of kind display names.
  std::vector<std::string> indicator_kinds;

  double range_resolution_m = 1.0;
  double accurate_error_limit = kAccurateErrorLimit;

  // The config whose scores drive the false-positive/-negative tally.
  std::string designated_kind = "contradiction";
  double designated_threshold = 2.0;

  double delta2_cutoff = 100.0;

  std::string output_dir = "out";
  int workers = 0;  // 0: take EVIGRID_WORKERS, else run serially
  bool write_images = false;

  void validate() const;  // throws std::invalid_argument
  std::vector<IndicatorConfig> selected_configs() const;
  Scenario scenario_for(const std::string& environment, SensorKind sensor,
                        std::uint64_t seed) const;
  const SensorModelParams& params_for(SensorKind sensor) const;
};

ExperimentConfig load_experiment_config(const std::string& path);
void save_experiment_config(const std::string& path,
                            const ExperimentConfig& config);

// One scored (run, sample distance, indicator config) triple.
struct SampleScore {
  std::string environment;
  SensorKind sensor = SensorKind::sonar;
  std::uint64_t seed = 0;
  double distance = 0.0;
  int config_index = 0;       // position in selected_configs()
  std::string config_label;
  IndicatorKind kind = IndicatorKind::total;
  double conflict_score = 0.0;
  int suspect_count = 0;
  double delta2 = 0.0;        // conflict map vs. error image
  bool delta2_both_empty = false;
  double error_score = 0.0;   // shared by every config of the sample
};

// Replays one run log: builds a fresh grid over the run's start pose,
// applies the scans in order, and at each sample distance scores every
// selected indicator config against the map error.  Returns one record
// per (sample, config), ordered by sample then config.
std::vector<SampleScore> run_experiment(const ExperimentConfig& config,
                                        const RunLog& log);

// The full protocol: every environment x sensor x seed, simulated and
// replayed (concurrently when workers > 1), records sorted on
// (environment, sensor, seed, distance, config).
std::vector<SampleScore> sweep(const ExperimentConfig& config);

void write_scores_csv(const std::string& path,
                      const std::vector<SampleScore>& records);
std::vector<SampleScore> read_scores_csv(const std::string& path);

// Per-config rollup across every sample record of that config.
struct ConfigSummary {
  int config_index = 0;
  IndicatorConfig config;
  std::string label;
  int n_samples = 0;
  bool pearson_sonar_defined = false;
  double pearson_sonar = 0.0;
  bool pearson_laser_defined = false;
  double pearson_laser = 0.0;
  bool pearson_pooled_defined = false;
  double pearson_pooled = 0.0;
  double mean_delta2 = 0.0;
  bool fld_defined = false;
  double fld_value = 0.0;  // accurate-class scores vs. inaccurate-class
};

// Mean/variance/best of one per-config statistic across a kind's
// configs, counting only configs where the statistic is defined.
struct Aggregate {
  int defined = 0;
  double mean = 0.0;
  double variance = 0.0;  // population
  double best = 0.0;      // max, except min for delta2
};

struct KindSummary {
  IndicatorKind kind = IndicatorKind::total;
  int n_configs = 0;
  Aggregate pearson_sonar;
  Aggregate pearson_laser;
  Aggregate pearson_pooled;
  Aggregate delta2;
  Aggregate fld;
};

struct Report {
  std::vector<ConfigSummary> configs;  // sweep order
  std::vector<KindSummary> kinds;      // alphabetical by display name
  std::string designated_label;
  bool designated_found = false;
  int accurate_samples = 0;
  int inaccurate_samples = 0;
  int false_positives = 0;   // accurate sample, designated score > 0
  int false_negatives = 0;   // inaccurate sample, designated score == 0
};

Report build_report(const std::vector<SampleScore>& records,
                    const ExperimentConfig& config);

void write_report_csv(const std::string& path, const Report& report);
void write_config_summary_csv(const std::string& path, const Report& report);
void write_report_text(const std::string& path, const Report& report);

}  // namespace evigrid
