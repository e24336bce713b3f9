#include "evigrid/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "evigrid/environment.hpp"
#include "evigrid/text.hpp"

namespace evigrid {

namespace {

constexpr double kDistanceSlack = 1e-9;

double beam_spacing_deg(SensorKind sensor) {
  return sensor == SensorKind::sonar ? 360.0 / 16.0 : 1.0;
}

}  // namespace

std::vector<double> default_sample_distances() {
  std::vector<double> out;
  out.reserve(10);
  for (int i = 0; i < 10; ++i) out.push_back(1.0 + 0.5 * i);
  return out;
}

void ExperimentConfig::validate() const {
  if (environments.empty()) {
    throw std::invalid_argument("config needs at least one environment");
  }
  for (const auto& name : environments) environment_by_name(name);
  if (seeds.empty()) {
    throw std::invalid_argument("config needs at least one seed");
  }
  if (sensors.empty()) {
    throw std::invalid_argument("config needs at least one sensor");
  }
  if (!(start_x > 0.0) || !(step > 0.0) || scan_count < 1) {
    throw std::invalid_argument("invalid run shape");
  }
  if (!(grid_side_length > 0.0) || !(grid_cell_size > 0.0)) {
    throw std::invalid_argument("invalid grid dimensions");
  }
  sonar_params.validate();
  laser_params.validate();
  anomaly.validate();
  if (sample_distances.empty()) {
    throw std::invalid_argument("config needs at least one sample distance");
  }
  const double reach = scan_count * step + kDistanceSlack;
  for (std::size_t i = 0; i < sample_distances.size(); ++i) {
    const double d = sample_distances[i];
    if (!(d > 0.0) || d > reach) {
      throw std::invalid_argument("sample distance outside the run");
    }
    if (i > 0 && !(d > sample_distances[i - 1])) {
      throw std::invalid_argument(
          "sample distances must be strictly increasing");
    }
  }
  for (const auto& name : indicator_kinds) indicator_kind_by_name(name);
  if (!(range_resolution_m > 0.0)) {
    throw std::invalid_argument("range resolution must be positive");
  }
  if (!(accurate_error_limit > 0.0)) {
    throw std::invalid_argument("accuracy limit must be positive");
  }
  indicator_kind_by_name(designated_kind);
  if (!(designated_threshold > 0.0)) {
    throw std::invalid_argument("designated threshold must be positive");
  }
  if (!(delta2_cutoff > 0.0)) {
    throw std::invalid_argument("image-distance cutoff must be positive");
  }
  if (workers < 0) {
    throw std::invalid_argument("worker count cannot be negative");
  }
}

std::vector<IndicatorConfig> ExperimentConfig::selected_configs() const {
  std::vector<IndicatorConfig> all = enumerate_configs();
  if (indicator_kinds.empty()) return all;
  std::set<IndicatorKind> wanted;
  for (const auto& name : indicator_kinds) {
    wanted.insert(indicator_kind_by_name(name));
  }
  std::vector<IndicatorConfig> out;
  for (const auto& cfg : all) {
    if (wanted.count(cfg.kind)) out.push_back(cfg);
  }
  return out;
}

Scenario ExperimentConfig::scenario_for(const std::string& environment,
                                        SensorKind sensor,
                                        std::uint64_t seed) const {
  Scenario sc;
  sc.environment = environment;
  sc.sensor = sensor;
  sc.seed = seed;
  sc.anomalies = anomalies;
  sc.start_x = start_x;
  sc.step = step;
  sc.scan_count = scan_count;
  return sc;
}

const SensorModelParams& ExperimentConfig::params_for(
    SensorKind sensor) const {
  return sensor == SensorKind::sonar ? sonar_params : laser_params;
}

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument("unknown config key " + where + "." +
                                  item.key());
    }
  }
}

void read_sensor_params(const json& j, const std::string& where,
                        SensorModelParams& p) {
  check_keys(j, {"max_range", "half_angle", "max_occupied_mass",
                  "range_tolerance"},
             where);
  if (j.contains("max_range")) p.max_range = j.at("max_range").get<double>();
  if (j.contains("half_angle")) {
    p.half_angle = j.at("half_angle").get<double>();
  }
  if (j.contains("max_occupied_mass")) {
    p.max_occupied_mass = j.at("max_occupied_mass").get<double>();
  }
  if (j.contains("range_tolerance")) {
    p.range_tolerance = j.at("range_tolerance").get<double>();
  }
}

json sensor_params_json(const SensorModelParams& p) {
  return json{{"max_range", p.max_range},
              {"half_angle", p.half_angle},
              {"max_occupied_mass", p.max_occupied_mass},
              {"range_tolerance", p.range_tolerance}};
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config file must hold a JSON object");
  }
  check_keys(j,
             {"environments", "seeds", "sensors", "anomalies", "start_x",
              "step", "scan_count", "grid_side_length", "grid_cell_size",
              "sonar", "laser", "anomaly", "sample_distances",
              "indicator_kinds", "range_resolution_m", "accurate_error_limit",
              "designated", "delta2_cutoff", "output_dir", "workers",
              "write_images"},
             "config");

  ExperimentConfig cfg;
  if (j.contains("environments")) {
    cfg.environments = j.at("environments").get<std::vector<std::string>>();
  }
  if (j.contains("seeds")) {
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  if (j.contains("sensors")) {
    cfg.sensors.clear();
    for (const auto& name : j.at("sensors")) {
      cfg.sensors.push_back(sensor_kind_by_name(name.get<std::string>()));
    }
  }
  if (j.contains("anomalies")) cfg.anomalies = j.at("anomalies").get<bool>();
  if (j.contains("start_x")) cfg.start_x = j.at("start_x").get<double>();
  if (j.contains("step")) cfg.step = j.at("step").get<double>();
  if (j.contains("scan_count")) {
    cfg.scan_count = j.at("scan_count").get<int>();
  }
  if (j.contains("grid_side_length")) {
    cfg.grid_side_length = j.at("grid_side_length").get<double>();
  }
  if (j.contains("grid_cell_size")) {
    cfg.grid_cell_size = j.at("grid_cell_size").get<double>();
  }
  if (j.contains("sonar")) {
    read_sensor_params(j.at("sonar"), "sonar", cfg.sonar_params);
  }
  if (j.contains("laser")) {
    read_sensor_params(j.at("laser"), "laser", cfg.laser_params);
  }
  if (j.contains("anomaly")) {
    const json& a = j.at("anomaly");
    check_keys(a,
               {"critical_angle", "specular_max_range_prob",
                "specular_elongation", "glass_transmission_prob",
                "range_noise_sigma"},
               "anomaly");
    if (a.contains("critical_angle")) {
      cfg.anomaly.critical_angle = a.at("critical_angle").get<double>();
    }
    if (a.contains("specular_max_range_prob")) {
      cfg.anomaly.specular_max_range_prob =
          a.at("specular_max_range_prob").get<double>();
    }
    if (a.contains("specular_elongation")) {
      cfg.anomaly.specular_elongation =
          a.at("specular_elongation").get<double>();
    }
    if (a.contains("glass_transmission_prob")) {
      cfg.anomaly.glass_transmission_prob =
          a.at("glass_transmission_prob").get<double>();
    }
    if (a.contains("range_noise_sigma")) {
      cfg.anomaly.range_noise_sigma = a.at("range_noise_sigma").get<double>();
    }
  }
  if (j.contains("sample_distances")) {
    cfg.sample_distances =
        j.at("sample_distances").get<std::vector<double>>();
  }
  if (j.contains("indicator_kinds")) {
    cfg.indicator_kinds =
        j.at("indicator_kinds").get<std::vector<std::string>>();
  }
  if (j.contains("range_resolution_m")) {
    cfg.range_resolution_m = j.at("range_resolution_m").get<double>();
  }
  if (j.contains("accurate_error_limit")) {
    cfg.accurate_error_limit = j.at("accurate_error_limit").get<double>();
  }
  if (j.contains("designated")) {
    const json& d = j.at("designated");
    check_keys(d, {"kind", "threshold"}, "designated");
    if (d.contains("kind")) {
      cfg.designated_kind = d.at("kind").get<std::string>();
    }
    if (d.contains("threshold")) {
      cfg.designated_threshold = d.at("threshold").get<double>();
    }
  }
  if (j.contains("delta2_cutoff")) {
    cfg.delta2_cutoff = j.at("delta2_cutoff").get<double>();
  }
  if (j.contains("output_dir")) {
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
  if (j.contains("write_images")) {
    cfg.write_images = j.at("write_images").get<bool>();
  }
  cfg.validate();
  return cfg;
}

void save_experiment_config(const std::string& path,
                            const ExperimentConfig& cfg) {
  json j;
  j["environments"] = cfg.environments;
  j["seeds"] = cfg.seeds;
  json sensors = json::array();
  for (const SensorKind s : cfg.sensors) sensors.push_back(sensor_kind_name(s));
  j["sensors"] = sensors;
  j["anomalies"] = cfg.anomalies;
  j["start_x"] = cfg.start_x;
  j["step"] = cfg.step;
  j["scan_count"] = cfg.scan_count;
  j["grid_side_length"] = cfg.grid_side_length;
  j["grid_cell_size"] = cfg.grid_cell_size;
  j["sonar"] = sensor_params_json(cfg.sonar_params);
  j["laser"] = sensor_params_json(cfg.laser_params);
  j["anomaly"] = json{
      {"critical_angle", cfg.anomaly.critical_angle},
      {"specular_max_range_prob", cfg.anomaly.specular_max_range_prob},
      {"specular_elongation", cfg.anomaly.specular_elongation},
      {"glass_transmission_prob", cfg.anomaly.glass_transmission_prob},
      {"range_noise_sigma", cfg.anomaly.range_noise_sigma}};
  j["sample_distances"] = cfg.sample_distances;
  j["indicator_kinds"] = cfg.indicator_kinds;
  j["range_resolution_m"] = cfg.range_resolution_m;
  j["accurate_error_limit"] = cfg.accurate_error_limit;
  j["designated"] = json{{"kind", cfg.designated_kind},
                         {"threshold", cfg.designated_threshold}};
  j["delta2_cutoff"] = cfg.delta2_cutoff;
  j["output_dir"] = cfg.output_dir;
  j["workers"] = cfg.workers;
  j["write_images"] = cfg.write_images;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file " + path);
  out << j.dump(2) << "\n";
  if (!out.good()) throw std::runtime_error("failed writing " + path);
}

namespace {

// Byte-content hash so identical suspect maps share one image-distance
// evaluation within a sample.
struct BytesHash {
  std::size_t operator()(const std::vector<std::uint8_t>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (const std::uint8_t b : v) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

int designated_config_index(const std::vector<IndicatorConfig>& configs,
                            const ExperimentConfig& cfg) {
  const IndicatorKind kind = indicator_kind_by_name(cfg.designated_kind);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (configs[i].kind == kind &&
        configs[i].primary_threshold == cfg.designated_threshold) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

std::string sample_image_stem(const RunLog& log, double distance) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%s_s%llu_d%04d",
                log.scenario.environment.c_str(),
                sensor_kind_name(log.scenario.sensor),
                static_cast<unsigned long long>(log.scenario.seed),
                static_cast<int>(std::lround(distance * 100.0)));
  return buf;
}

}  // namespace

std::vector<SampleScore> run_experiment(const ExperimentConfig& cfg,
                                        const RunLog& log) {
  cfg.validate();
  log.scenario.validate();
  const Environment env = environment_by_name(log.scenario.environment);
  const double reach = log.records.empty() ? 0.0
                                           : log.records.back().distance;
  if (cfg.sample_distances.back() > reach + kDistanceSlack) {
    throw std::invalid_argument("run log ends before the sample schedule");
  }

  SensorModelParams params = cfg.params_for(log.scenario.sensor);
  params.kind = log.scenario.sensor;
  params.validate();

  GridSpec spec;
  spec.side_length = cfg.grid_side_length;
  spec.cell_size = cfg.grid_cell_size;
  spec.origin_x = log.scenario.start_x;
  spec.origin_y = 0.0;
  const TruthGrid truth = rasterize_truth(env, spec);

  const std::vector<IndicatorConfig> configs = cfg.selected_configs();
  const int designated = designated_config_index(configs, cfg);

  std::filesystem::path image_dir;
  if (cfg.write_images) {
    image_dir = std::filesystem::path(cfg.output_dir) / "images";
    std::filesystem::create_directories(image_dir);
  }

  EvidenceGrid grid(spec);
  std::vector<SampleScore> out;
  out.reserve(cfg.sample_distances.size() * configs.size());

  std::size_t next_sample = 0;
  for (const ScanRecord& rec : log.records) {
    grid.update_from_scan(rec.readings, params);
    while (next_sample < cfg.sample_distances.size() &&
           rec.distance + kDistanceSlack >=
               cfg.sample_distances[next_sample]) {
      const double sample_d = cfg.sample_distances[next_sample];
      ++next_sample;

      const double error = grid.error_score(truth);
      const BinaryImage error_img = grid.error_image(truth);
      const PreparedDistances error_side = prepare_distances(error_img);
      const FeatureField field =
          compute_features(grid, beam_spacing_deg(log.scenario.sensor),
                           cfg.range_resolution_m);

      if (cfg.write_images) {
        write_pgm((image_dir / (sample_image_stem(log, sample_d) +
                                "_error.pgm")).string(),
                  error_img, "map error, binarized");
      }

      std::unordered_map<std::vector<std::uint8_t>, Delta2Result, BytesHash>
          memo;
      for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        ConflictMap cm = conflict_map(field, configs[ci]);

        SampleScore row;
        row.environment = log.scenario.environment;
        row.sensor = log.scenario.sensor;
        row.seed = log.scenario.seed;
        row.distance = sample_d;
        row.config_index = static_cast<int>(ci);
        row.config_label = configs[ci].label();
        row.kind = configs[ci].kind;
        row.conflict_score = cm.score;
        row.suspect_count = cm.suspect_count;
        row.error_score = error;

        const auto it = memo.find(cm.suspect);
        Delta2Result d2;
        if (it != memo.end()) {
          d2 = it->second;
        } else {
          BinaryImage suspect_img;
          suspect_img.width = field.side;
          suspect_img.height = field.side;
          suspect_img.pixels = cm.suspect;
          d2 = baddeley_delta2(prepare_distances(suspect_img), error_side,
                               cfg.delta2_cutoff);
          memo.emplace(std::move(cm.suspect), d2);
        }
        row.delta2 = d2.value;
        row.delta2_both_empty = d2.both_empty;

        if (cfg.write_images && static_cast<int>(ci) == designated) {
          BinaryImage suspect_img;
          suspect_img.width = field.side;
          suspect_img.height = field.side;
          suspect_img.pixels = conflict_map(field, configs[ci]).suspect;
          write_pgm((image_dir / (sample_image_stem(log, sample_d) +
                                  "_conflict.pgm")).string(),
                    suspect_img, "suspect cells, " + row.config_label);
        }
        out.push_back(std::move(row));
      }
    }
  }
  if (next_sample < cfg.sample_distances.size()) {
    throw std::invalid_argument("run log ends before the sample schedule");
  }
  return out;
}

namespace {

int resolve_workers(const ExperimentConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("EVIGRID_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

struct SweepUnit {
  std::string environment;
  SensorKind sensor;
  std::uint64_t seed;
};

bool score_order(const SampleScore& a, const SampleScore& b) {
  if (a.environment != b.environment) return a.environment < b.environment;
  if (a.sensor != b.sensor) {
    return std::string_view(sensor_kind_name(a.sensor)) <
           sensor_kind_name(b.sensor);
  }
  if (a.seed != b.seed) return a.seed < b.seed;
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.config_index < b.config_index;
}

}  // namespace

std::vector<SampleScore> sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<SweepUnit> units;
  for (const auto& env : cfg.environments) {
    for (const SensorKind sensor : cfg.sensors) {
      for (const std::uint64_t seed : cfg.seeds) {
        units.push_back({env, sensor, seed});
      }
    }
  }

  const AnomalyParams anomaly =
      cfg.anomalies ? cfg.anomaly : AnomalyParams::none();
  std::vector<std::vector<SampleScore>> per_unit(units.size());

  auto run_unit = [&](std::size_t i) {
    const SweepUnit& u = units[i];
    const RunLog log =
        generate_run(cfg.scenario_for(u.environment, u.sensor, u.seed),
                     anomaly, cfg.params_for(u.sensor).max_range);
    per_unit[i] = run_experiment(cfg, log);
  };

  const int workers =
      std::min<int>(resolve_workers(cfg), static_cast<int>(units.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < units.size(); ++i) run_unit(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto body = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= units.size()) return;
        try {
          run_unit(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<SampleScore> out;
  std::size_t total = 0;
  for (const auto& v : per_unit) total += v.size();
  out.reserve(total);
  for (auto& v : per_unit) {
    out.insert(out.end(), std::make_move_iterator(v.begin()),
               std::make_move_iterator(v.end()));
  }
  std::sort(out.begin(), out.end(), score_order);
  return out;
}

void write_scores_csv(const std::string& path,
                      const std::vector<SampleScore>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "environment,sensor,seed,distance,config_index,kind,config,"
         "conflict_score,suspect_count,delta2,delta2_both_empty,"
         "error_score\n";
  for (const SampleScore& r : records) {
    out << r.environment << ',' << sensor_kind_name(r.sensor) << ','
        << r.seed << ',' << format_g17(r.distance) << ',' << r.config_index
        << ',' << indicator_kind_name(r.kind) << ',' << r.config_label << ','
        << format_g17(r.conflict_score) << ',' << r.suspect_count << ','
        << format_g17(r.delta2) << ',' << (r.delta2_both_empty ? 1 : 0)
        << ',' << format_g17(r.error_score) << '\n';
  }
  if (!out.good()) throw std::runtime_error("failed writing " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path + ": bad numeric field '" + s + "'");
  }
}

}  // namespace

std::vector<SampleScore> read_scores_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line !=
          "environment,sensor,seed,distance,config_index,kind,config,"
          "conflict_score,suspect_count,delta2,delta2_both_empty,"
          "error_score") {
    throw std::runtime_error(path + ": not a scores table");
  }
  std::vector<SampleScore> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 12) {
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    }
    SampleScore r;
    r.environment = f[0];
    r.sensor = sensor_kind_by_name(f[1]);
    r.seed = std::stoull(f[2]);
    r.distance = parse_double(f[3], path);
    r.config_index = std::stoi(f[4]);
    r.kind = indicator_kind_by_name(f[5]);
    r.config_label = f[6];
    r.conflict_score = parse_double(f[7], path);
    r.suspect_count = std::stoi(f[8]);
    r.delta2 = parse_double(f[9], path);
    r.delta2_both_empty = f[10] == "1";
    r.error_score = parse_double(f[11], path);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

bool try_pearson(const std::vector<double>& a, const std::vector<double>& b,
                 double& out) {
  try {
    out = pearson(a, b);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

Aggregate aggregate_values(const std::vector<double>& values, bool best_is_min) {
  Aggregate agg;
  agg.defined = static_cast<int>(values.size());
  if (values.empty()) return agg;
  double sum = 0.0;
  for (const double v : values) sum += v;
  agg.mean = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (const double v : values) {
    const double d = v - agg.mean;
    var += d * d;
  }
  agg.variance = var / static_cast<double>(values.size());
  agg.best = best_is_min ? *std::min_element(values.begin(), values.end())
                         : *std::max_element(values.begin(), values.end());
  return agg;
}

}  // namespace

Report build_report(const std::vector<SampleScore>& records,
                    const ExperimentConfig& cfg) {
  if (records.empty()) {
    throw std::invalid_argument("cannot report on an empty dataset");
  }
  const std::vector<IndicatorConfig> configs = cfg.selected_configs();

  struct PerConfig {
    std::vector<double> scores_sonar, errors_sonar;
    std::vector<double> scores_laser, errors_laser;
    std::vector<double> scores_all, errors_all;
    std::vector<double> delta2;
    std::vector<double> accurate_scores, inaccurate_scores;
  };
  std::vector<PerConfig> per(configs.size());

  for (const SampleScore& r : records) {
    if (r.config_index < 0 ||
        r.config_index >= static_cast<int>(configs.size())) {
      throw std::invalid_argument("record's config index is outside the "
                                  "configured sweep selection");
    }
    if (r.config_label != configs[r.config_index].label()) {
      throw std::invalid_argument(
          "records do not match the configured sweep selection: " +
          r.config_label + " vs " + configs[r.config_index].label());
    }
    PerConfig& p = per[r.config_index];
    p.scores_all.push_back(r.conflict_score);
    p.errors_all.push_back(r.error_score);
    if (r.sensor == SensorKind::sonar) {
      p.scores_sonar.push_back(r.conflict_score);
      p.errors_sonar.push_back(r.error_score);
    } else {
      p.scores_laser.push_back(r.conflict_score);
      p.errors_laser.push_back(r.error_score);
    }
    p.delta2.push_back(r.delta2);
    if (r.error_score < cfg.accurate_error_limit) {
      p.accurate_scores.push_back(r.conflict_score);
    } else {
      p.inaccurate_scores.push_back(r.conflict_score);
    }
  }

  Report rep;
  rep.configs.reserve(configs.size());
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    const PerConfig& p = per[ci];
    ConfigSummary s;
    s.config_index = static_cast<int>(ci);
    s.config = configs[ci];
    s.label = configs[ci].label();
    s.n_samples = static_cast<int>(p.scores_all.size());
    if (s.n_samples == 0) {
      rep.configs.push_back(std::move(s));
      continue;
    }
    s.pearson_sonar_defined =
        try_pearson(p.scores_sonar, p.errors_sonar, s.pearson_sonar);
    s.pearson_laser_defined =
        try_pearson(p.scores_laser, p.errors_laser, s.pearson_laser);
    s.pearson_pooled_defined =
        try_pearson(p.scores_all, p.errors_all, s.pearson_pooled);
    double dsum = 0.0;
    for (const double d : p.delta2) dsum += d;
    s.mean_delta2 = dsum / static_cast<double>(p.delta2.size());
    if (!p.accurate_scores.empty() && !p.inaccurate_scores.empty()) {
      try {
        s.fld_value = fld(p.accurate_scores, p.inaccurate_scores);
        s.fld_defined = true;
      } catch (const std::exception&) {
        s.fld_defined = false;
      }
    }
    rep.configs.push_back(std::move(s));
  }

  // Kind rollups, alphabetical by display name.
  std::vector<IndicatorKind> kinds(kAllIndicatorKinds.begin(),
                                   kAllIndicatorKinds.end());
  std::sort(kinds.begin(), kinds.end(), [](IndicatorKind a, IndicatorKind b) {
    return indicator_kind_name(a) < indicator_kind_name(b);
  });
  for (const IndicatorKind kind : kinds) {
    KindSummary ks;
    ks.kind = kind;
    std::vector<double> ps, pl, pp, d2, fl;
    for (const ConfigSummary& s : rep.configs) {
      if (s.config.kind != kind || s.n_samples == 0) continue;
      ++ks.n_configs;
      if (s.pearson_sonar_defined) ps.push_back(s.pearson_sonar);
      if (s.pearson_laser_defined) pl.push_back(s.pearson_laser);
      if (s.pearson_pooled_defined) pp.push_back(s.pearson_pooled);
      d2.push_back(s.mean_delta2);
      if (s.fld_defined) fl.push_back(s.fld_value);
    }
    if (ks.n_configs == 0) continue;
    ks.pearson_sonar = aggregate_values(ps, false);
    ks.pearson_laser = aggregate_values(pl, false);
    ks.pearson_pooled = aggregate_values(pp, false);
    ks.delta2 = aggregate_values(d2, true);
    ks.fld = aggregate_values(fl, false);
    rep.kinds.push_back(ks);
  }

  // False-positive / false-negative tally at the designated config.
  const int designated = designated_config_index(configs, cfg);
  if (designated >= 0) {
    rep.designated_found = true;
    rep.designated_label = configs[designated].label();
    const PerConfig& p = per[designated];
    rep.accurate_samples = static_cast<int>(p.accurate_scores.size());
    rep.inaccurate_samples = static_cast<int>(p.inaccurate_scores.size());
    for (const double s : p.accurate_scores) {
      if (s > 0.0) ++rep.false_positives;
    }
    for (const double s : p.inaccurate_scores) {
      if (s == 0.0) ++rep.false_negatives;
    }
  } else {
    rep.designated_label = cfg.designated_kind + "@" +
                           format_g17(cfg.designated_threshold) +
                           " (not in the sweep selection)";
    // The accuracy split is a property of the samples, not of the missing
    // config; tally it from any config that saw every sample.
    for (const PerConfig& p : per) {
      if (p.scores_all.empty()) continue;
      rep.accurate_samples = static_cast<int>(p.accurate_scores.size());
      rep.inaccurate_samples = static_cast<int>(p.inaccurate_scores.size());
      break;
    }
  }
  return rep;
}

namespace {

struct MetricColumn {
  const char* name;
  const Aggregate KindSummary::*field;
};

constexpr MetricColumn kMetricColumns[] = {
    {"pearson_sonar", &KindSummary::pearson_sonar},
    {"pearson_laser", &KindSummary::pearson_laser},
    {"pearson_pooled", &KindSummary::pearson_pooled},
    {"delta2", &KindSummary::delta2},
    {"fld", &KindSummary::fld},
};

std::string agg_field(const Aggregate& a, double Aggregate::*member) {
  return a.defined > 0 ? format_g17(a.*member) : std::string();
}

}  // namespace

void write_report_csv(const std::string& path, const Report& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "metric,kind,configs,defined,mean,variance,best\n";
  for (const MetricColumn& col : kMetricColumns) {
    for (const KindSummary& ks : rep.kinds) {
      const Aggregate& a = ks.*(col.field);
      out << col.name << ',' << indicator_kind_name(ks.kind) << ','
          << ks.n_configs << ',' << a.defined << ','
          << agg_field(a, &Aggregate::mean) << ','
          << agg_field(a, &Aggregate::variance) << ','
          << agg_field(a, &Aggregate::best) << '\n';
    }
  }
  out << "# designated," << rep.designated_label << ",accurate,"
      << rep.accurate_samples << ",inaccurate," << rep.inaccurate_samples
      << ",false_positives," << rep.false_positives << ",false_negatives,"
      << rep.false_negatives << '\n';
  if (!out.good()) throw std::runtime_error("failed writing " + path);
}

void write_config_summary_csv(const std::string& path, const Report& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "config_index,kind,config,n_samples,pearson_sonar,pearson_laser,"
         "pearson_pooled,mean_delta2,fld\n";
  for (const ConfigSummary& s : rep.configs) {
    out << s.config_index << ',' << indicator_kind_name(s.config.kind) << ','
        << s.label << ',' << s.n_samples << ','
        << (s.pearson_sonar_defined ? format_g17(s.pearson_sonar)
                                    : std::string())
        << ','
        << (s.pearson_laser_defined ? format_g17(s.pearson_laser)
                                    : std::string())
        << ','
        << (s.pearson_pooled_defined ? format_g17(s.pearson_pooled)
                                     : std::string())
        << ',' << (s.n_samples > 0 ? format_g17(s.mean_delta2) : std::string())
        << ',' << (s.fld_defined ? format_g17(s.fld_value) : std::string())
        << '\n';
  }
  if (!out.good()) throw std::runtime_error("failed writing " + path);
}

void write_report_text(const std::string& path, const Report& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const char* metric_titles[] = {
      "Correlation with map error, sonar runs (150 pairs each)",
      "Correlation with map error, laser runs (150 pairs each)",
      "Correlation with map error, all runs pooled",
      "Image distance between suspect map and error image (lower is better)",
      "Class separation, accurate vs inaccurate maps (higher is better)",
  };
  for (std::size_t m = 0; m < std::size(kMetricColumns); ++m) {
    out << metric_titles[m] << "\n";
    out << "  kind                  mean        variance    best        "
           "defined/N\n";
    for (const KindSummary& ks : rep.kinds) {
      const Aggregate& a = ks.*(kMetricColumns[m].field);
      char line[160];
      if (a.defined > 0) {
        std::snprintf(line, sizeof(line),
                      "  %-20s  %-10.4g  %-10.4g  %-10.4g  %d/%d\n",
                      std::string(indicator_kind_name(ks.kind)).c_str(),
                      a.mean, a.variance, a.best, a.defined, ks.n_configs);
      } else {
        std::snprintf(line, sizeof(line),
                      "  %-20s  undefined for every config      0/%d\n",
                      std::string(indicator_kind_name(ks.kind)).c_str(),
                      ks.n_configs);
      }
      out << line;
    }
    out << "\n";
  }
  out << "Classification at " << rep.designated_label << "\n";
  out << "  accurate maps:    " << rep.accurate_samples << "\n";
  out << "  inaccurate maps:  " << rep.inaccurate_samples << "\n";
  if (rep.designated_found) {
    out << "  false positives:  " << rep.false_positives;
    if (rep.accurate_samples > 0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), " (%.1f%%)",
                    100.0 * rep.false_positives / rep.accurate_samples);
      out << buf;
    }
    out << "\n  false negatives:  " << rep.false_negatives;
    if (rep.inaccurate_samples > 0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), " (%.1f%%)",
                    100.0 * rep.false_negatives / rep.inaccurate_samples);
      out << buf;
    }
    out << "\n";
  }
  if (!out.good()) throw std::runtime_error("failed writing " + path);
}

}  // namespace evigrid
