// Batch front end: simulate hallway runs, build evidential grids, score
// indicator configurations, and summarize the results.
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evigrid/environment.hpp"
#include "evigrid/gridmap.hpp"
#include "evigrid/harness.hpp"
#include "evigrid/simworld.hpp"
#include "evigrid/text.hpp"

namespace fs = std::filesystem;
using namespace evigrid;

namespace {

GridSpec grid_spec_for(const ExperimentConfig& cfg, const RunLog& log) {
  GridSpec spec;
  spec.side_length = cfg.grid_side_length;
  spec.cell_size = cfg.grid_cell_size;
  spec.origin_x = log.scenario.start_x;
  spec.origin_y = 0.0;
  return spec;
}

std::string unit_stem(const std::string& env, SensorKind sensor,
                      std::uint64_t seed) {
  return env + "_" + sensor_kind_name(sensor) + "_s" + std::to_string(seed);
}

int run_simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path dir = fs::path(cfg.output_dir) / "runs";
  fs::create_directories(dir);
  int written = 0;
  for (const auto& env : cfg.environments)
    for (const SensorKind sensor : cfg.sensors)
      for (const std::uint64_t seed : cfg.seeds) {
        const AnomalyParams anomaly =
            cfg.anomalies ? cfg.anomaly : AnomalyParams::none();
        const RunLog log =
            generate_run(cfg.scenario_for(env, sensor, seed), anomaly,
                         cfg.params_for(sensor).max_range);
        const fs::path path = dir / (unit_stem(env, sensor, seed) + ".jsonl");
        write_runlog(path.string(), log);
        std::printf("%s  (%zu scans)\n", path.c_str(),
                    log.records.size());
        ++written;
      }
  std::printf("%d run log%s under %s\n", written, written == 1 ? "" : "s",
              dir.c_str());
  return 0;
}

int run_map(const ExperimentConfig& cfg, const std::string& log_path) {
  const RunLog log = read_runlog(log_path);
  const GridSpec spec = grid_spec_for(cfg, log);
  EvidenceGrid grid(spec);
  const SensorModelParams& params = cfg.params_for(log.scenario.sensor);
  for (const ScanRecord& rec : log.records) {
    grid.update_from_scan(rec.readings, params);
  }
  const TruthGrid truth =
      rasterize_truth(environment_by_name(log.scenario.environment), spec);

  const fs::path dir = fs::path(cfg.output_dir) / "maps";
  fs::create_directories(dir);
  const std::string stem = fs::path(log_path).stem().string();
  const auto out = [&](const char* suffix) {
    return (dir / (stem + suffix)).string();
  };
  grid.write_channel_pgm(out("_occupied.pgm"), BeliefStream::normalized,
                         BeliefChannel::occupied);
  grid.write_channel_pgm(out("_empty.pgm"), BeliefStream::normalized,
                         BeliefChannel::empty);
  grid.write_channel_pgm(out("_conflict.pgm"), BeliefStream::unnormalized,
                         BeliefChannel::conflict);
  write_pgm(out("_error.pgm"), grid.error_image(truth));
  truth.write_pgm(out("_truth.pgm"));
  grid.write_stats_csv(out("_stats.csv"));

  std::printf("%s: %d updated cells, error %s\n", stem.c_str(),
              grid.updated_cell_count(),
              format_g17(grid.error_score(truth)).c_str());
  std::printf("images and per-cell stats under %s\n", dir.c_str());
  return 0;
}

int run_score(const ExperimentConfig& cfg, const std::string& log_path) {
  const RunLog log = read_runlog(log_path);
  const auto records = run_experiment(cfg, log);

  fs::create_directories(cfg.output_dir);
  const std::string stem = fs::path(log_path).stem().string();
  const fs::path csv =
      fs::path(cfg.output_dir) / ("scores_" + stem + ".csv");
  write_scores_csv(csv.string(), records);

  // One stdout line per sample: the designated config when present,
  // otherwise just the map error.
  const std::size_t per_sample = cfg.selected_configs().size();
  for (std::size_t i = 0; i < records.size(); i += per_sample) {
    const SampleScore* shown = nullptr;
    for (std::size_t c = 0; c < per_sample; ++c) {
      const SampleScore& r = records[i + c];
      if (r.kind == indicator_kind_by_name(cfg.designated_kind) &&
          r.config_label ==
              cfg.designated_kind + "@" +
                  format_g17(cfg.designated_threshold)) {
        shown = &r;
        break;
      }
    }
    const SampleScore& base = records[i];
    const char* klass =
        base.error_score < cfg.accurate_error_limit ? "accurate"
                                                    : "inaccurate";
    if (shown != nullptr) {
      std::printf("d=%.2f  error=%9.3f  %-10s  %s=%.6f (%d suspect)\n",
                  base.distance, base.error_score, klass,
                  shown->config_label.c_str(), shown->conflict_score,
                  shown->suspect_count);
    } else {
      std::printf("d=%.2f  error=%9.3f  %-10s\n", base.distance,
                  base.error_score, klass);
    }
  }
  std::printf("%zu records -> %s\n", records.size(), csv.c_str());
  return 0;
}

int run_sweep(ExperimentConfig& cfg) {
  cfg.validate();
  const auto records = sweep(cfg);
  fs::create_directories(cfg.output_dir);
  const fs::path csv = fs::path(cfg.output_dir) / "scores.csv";
  write_scores_csv(csv.string(), records);
  std::printf("%zu records -> %s\n", records.size(), csv.c_str());
  return 0;
}

int run_report(const ExperimentConfig& cfg, std::string scores_path) {
  if (scores_path.empty()) {
    scores_path = (fs::path(cfg.output_dir) / "scores.csv").string();
  }
  const auto records = read_scores_csv(scores_path);
  const Report report = build_report(records, cfg);

  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  write_report_csv((dir / "report.csv").string(), report);
  write_config_summary_csv((dir / "config_summary.csv").string(), report);
  const std::string text_path = (dir / "report.txt").string();
  write_report_text(text_path, report);

  std::ifstream in(text_path);
  std::cout << in.rdbuf();
  std::printf("tables under %s\n", dir.c_str());
  return 0;
}

int run_configs(const ExperimentConfig& cfg) {
  const auto configs = cfg.selected_configs();
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::printf("%3zu  %s\n", i, configs[i].label().c_str());
  }
  std::printf("%zu configurations\n", configs.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "evigrid: evidential occupancy grids and conflict indicators for "
      "simulated hallway runs"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path,
                 "experiment config (JSON; omit for built-in defaults)")
      ->check(CLI::ExistingFile);
  std::vector<std::uint64_t> seed_override;
  app.add_option("--seed", seed_override,
                 "replace the config's seed list (repeatable)");
  int workers = -1;
  app.add_option(
      "--workers", workers,
      "worker threads; 0 defers to EVIGRID_WORKERS (default: config)");
  std::string out_dir;
  app.add_option("-o,--out", out_dir,
                 "output directory (default: config output_dir)");

  CLI::App* cmd_simulate = app.add_subcommand(
      "simulate", "write one JSON-lines run log per run of the protocol");
  CLI::App* cmd_map = app.add_subcommand(
      "map", "replay one run log into grid images and per-cell stats");
  CLI::App* cmd_score = app.add_subcommand(
      "score", "replay one run log and score every indicator config");
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "run the full protocol and write the scores table");
  CLI::App* cmd_report = app.add_subcommand(
      "report", "summarize a scores table into the three analysis tables");
  CLI::App* cmd_configs =
      app.add_subcommand("configs", "list the selected indicator configs");

  std::string map_log, score_log, report_scores;
  cmd_map->add_option("--log", map_log, "run log to replay")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_score->add_option("--log", score_log, "run log to replay")
      ->required()
      ->check(CLI::ExistingFile);
  bool sweep_images = false;
  cmd_sweep->add_flag("--images", sweep_images,
                      "also write per-sample error and suspect images");
  cmd_report->add_option("--scores", report_scores,
                         "scores CSV (default: <out>/scores.csv)")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = config_path.empty()
                               ? ExperimentConfig{}
                               : load_experiment_config(config_path);
    if (!seed_override.empty()) cfg.seeds = seed_override;
    if (workers >= 0) cfg.workers = workers;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (sweep_images) cfg.write_images = true;

    if (cmd_simulate->parsed()) return run_simulate(cfg);
    if (cmd_map->parsed()) return run_map(cfg, map_log);
    if (cmd_score->parsed()) return run_score(cfg, score_log);
    if (cmd_sweep->parsed()) return run_sweep(cfg);
    if (cmd_report->parsed()) return run_report(cfg, report_scores);
    if (cmd_configs->parsed()) return run_configs(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "evigrid: %s\n", e.what());
    return 1;
  }
  return 0;
}
