#include "evigrid/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "evigrid/text.hpp"

namespace evigrid {

std::string_view indicator_kind_name(IndicatorKind kind) {
  switch (kind) {
    case IndicatorKind::total: return "total";
    case IndicatorKind::angular_norm: return "angular-resolution";
    case IndicatorKind::range_norm: return "range-resolution";
    case IndicatorKind::update_rate_norm: return "update-rate";
    case IndicatorKind::max_increase: return "maximum-increase";
    case IndicatorKind::average: return "average";
    case IndicatorKind::average_sequence: return "average-sequence";
    case IndicatorKind::frequency: return "frequency";
    case IndicatorKind::increase_frequency: return "increase-frequency";
    case IndicatorKind::contradiction: return "contradiction";
    case IndicatorKind::area: return "area";
  }
  throw std::invalid_argument("unknown indicator kind");
}

IndicatorKind indicator_kind_by_name(std::string_view name) {
  for (const IndicatorKind k : kAllIndicatorKinds) {
    if (indicator_kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown indicator kind: " + std::string(name));
}

void IndicatorConfig::validate() const {
  if (!(primary_threshold > 0.0)) {
    throw std::invalid_argument("indicator threshold must be positive");
  }
  if (kind == IndicatorKind::increase_frequency) {
    con_magnitude_index(magnitude);  // throws on unknown magnitudes
  } else if (magnitude != 0.0) {
    throw std::invalid_argument(
        "magnitude applies only to the increase-frequency kind");
  }
  if (kind == IndicatorKind::area) {
    if (min_region_size < 1) {
      throw std::invalid_argument("area region size must be at least 1");
    }
  } else if (min_region_size != 0) {
    throw std::invalid_argument("region size applies only to the area kind");
  }
}

std::string IndicatorConfig::label() const {
  std::string out{indicator_kind_name(kind)};
  if (kind == IndicatorKind::increase_frequency) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "[%g]", magnitude);
    out += buf;
  } else if (kind == IndicatorKind::area) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "[%d]", min_region_size);
    out += buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "@%g", primary_threshold);
  out += buf;
  return out;
}

namespace {

void append_ladder(std::vector<IndicatorConfig>& out, IndicatorKind kind,
                   double step, int rungs, double magnitude = 0.0,
                   int min_region_size = 0) {
  for (int i = 1; i <= rungs; ++i) {
    IndicatorConfig cfg;
    cfg.kind = kind;
    cfg.primary_threshold = i * step;
    cfg.magnitude = magnitude;
    cfg.min_region_size = min_region_size;
    cfg.validate();
    out.push_back(cfg);
  }
}

}  // namespace

std::vector<IndicatorConfig> enumerate_configs() {
  std::vector<IndicatorConfig> out;
  out.reserve(355);
  append_ladder(out, IndicatorKind::total, 0.25, 20);
  append_ladder(out, IndicatorKind::angular_norm, 0.025, 20);
  append_ladder(out, IndicatorKind::range_norm, 0.25, 20);
  append_ladder(out, IndicatorKind::update_rate_norm, 0.025, 20);
  append_ladder(out, IndicatorKind::max_increase, 0.1, 20);
  append_ladder(out, IndicatorKind::average, 0.025, 20);
  append_ladder(out, IndicatorKind::average_sequence, 0.05, 20);
  append_ladder(out, IndicatorKind::frequency, 0.05, 19);
  for (const double magnitude : kConMagnitudes) {
    append_ladder(out, IndicatorKind::increase_frequency, 0.05, 19,
                  magnitude);
  }
  append_ladder(out, IndicatorKind::contradiction, 0.5, 20);
  for (const int size : {50, 100, 150, 200, 250}) {
    append_ladder(out, IndicatorKind::area, 0.25, 20, 0.0, size);
  }
  return out;
}

double cell_feature(const IndicatorConfig& cfg, const CellStats& stats,
                    const FeatureContext& ctx) {
  if (stats.n_updates < 1) return 0.0;
  switch (cfg.kind) {
    case IndicatorKind::total:
    case IndicatorKind::area:
      return stats.total_con;
    case IndicatorKind::angular_norm:
      return stats.total_con / ctx.angular_spacing_deg;
    case IndicatorKind::range_norm:
      return stats.total_con / ctx.range_resolution_m;
    case IndicatorKind::update_rate_norm:
      return ctx.mean_updates > 0.0 ? stats.total_con / ctx.mean_updates
                                    : 0.0;
    case IndicatorKind::max_increase:
      return stats.max_con;
    case IndicatorKind::average:
      return stats.total_con / stats.n_updates;
    case IndicatorKind::average_sequence:
      return stats.seq_len > 0 ? stats.seq_sum / stats.seq_len : 0.0;
    case IndicatorKind::frequency:
      return static_cast<double>(stats.n_conflicting) / stats.n_updates;
    case IndicatorKind::increase_frequency:
      return static_cast<double>(
                 stats.magnitude_counts[con_magnitude_index(cfg.magnitude)]) /
             stats.n_updates;
    case IndicatorKind::contradiction:
      return static_cast<double>(stats.contradiction_count);
  }
  throw std::invalid_argument("unknown indicator kind");
}

const std::vector<double>& FeatureField::layer(
    const IndicatorConfig& cfg) const {
  switch (cfg.kind) {
    case IndicatorKind::total:
    case IndicatorKind::area:
      return total;
    case IndicatorKind::angular_norm: return angular_norm;
    case IndicatorKind::range_norm: return range_norm;
    case IndicatorKind::update_rate_norm: return update_rate_norm;
    case IndicatorKind::max_increase: return max_increase;
    case IndicatorKind::average: return average;
    case IndicatorKind::average_sequence: return average_sequence;
    case IndicatorKind::frequency: return frequency;
    case IndicatorKind::increase_frequency:
      return increase_frequency[con_magnitude_index(cfg.magnitude)];
    case IndicatorKind::contradiction: return contradiction;
  }
  throw std::invalid_argument("unknown indicator kind");
}

FeatureField compute_features(const EvidenceGrid& grid,
                              double angular_spacing_deg,
                              double range_resolution_m) {
  if (!(angular_spacing_deg > 0.0) || !(range_resolution_m > 0.0)) {
    throw std::invalid_argument("feature divisors must be positive");
  }
  const std::span<const CellStats> stats = grid.stats_all();
  const std::size_t n = stats.size();

  FeatureField f;
  f.side = grid.side();
  f.context.angular_spacing_deg = angular_spacing_deg;
  f.context.range_resolution_m = range_resolution_m;

  long long update_sum = 0;
  for (const CellStats& s : stats) {
    if (s.n_updates >= 1) {
      ++f.updated_count;
      update_sum += s.n_updates;
    }
  }
  f.context.mean_updates =
      f.updated_count > 0
          ? static_cast<double>(update_sum) / f.updated_count
          : 0.0;

  f.updated.assign(n, 0);
  f.total.assign(n, 0.0);
  f.angular_norm.assign(n, 0.0);
  f.range_norm.assign(n, 0.0);
  f.update_rate_norm.assign(n, 0.0);
  f.max_increase.assign(n, 0.0);
  f.average.assign(n, 0.0);
  f.average_sequence.assign(n, 0.0);
  f.frequency.assign(n, 0.0);
  for (auto& layer : f.increase_frequency) layer.assign(n, 0.0);
  f.contradiction.assign(n, 0.0);

  IndicatorConfig probe;
  for (std::size_t i = 0; i < n; ++i) {
    const CellStats& s = stats[i];
    if (s.n_updates < 1) continue;
    f.updated[i] = 1;
    probe.kind = IndicatorKind::total;
    f.total[i] = cell_feature(probe, s, f.context);
    probe.kind = IndicatorKind::angular_norm;
    f.angular_norm[i] = cell_feature(probe, s, f.context);
    probe.kind = IndicatorKind::range_norm;
    f.range_norm[i] = cell_feature(probe, s, f.context);
    probe.kind = IndicatorKind::update_rate_norm;
    f.update_rate_norm[i] = cell_feature(probe, s, f.context);
    probe.kind = IndicatorKind::max_increase;
    f.max_increase[i] = cell_feature(probe, s, f.context);
    probe.kind = IndicatorKind::average;
    f.average[i] = cell_feature(probe, s, f.context);
    probe.kind = IndicatorKind::average_sequence;
    f.average_sequence[i] = cell_feature(probe, s, f.context);
    probe.kind = IndicatorKind::frequency;
    f.frequency[i] = cell_feature(probe, s, f.context);
    probe.kind = IndicatorKind::increase_frequency;
    for (std::size_t m = 0; m < kConMagnitudes.size(); ++m) {
      probe.magnitude = kConMagnitudes[m];
      f.increase_frequency[m][i] = cell_feature(probe, s, f.context);
    }
    probe.magnitude = 0.0;
    probe.kind = IndicatorKind::contradiction;
    f.contradiction[i] = cell_feature(probe, s, f.context);
  }
  return f;
}

namespace {

// Suspect mask for the area kind: threshold the base layer, then keep only
// 8-connected regions of at least the configured size.
ConflictMap area_map(const FeatureField& f, const IndicatorConfig& cfg) {
  BinaryImage base(f.side, f.side);
  for (std::size_t i = 0; i < f.total.size(); ++i) {
    base.pixels[i] = f.updated[i] && f.total[i] >= cfg.primary_threshold;
  }
  std::vector<int> sizes;
  const std::vector<int> labels = label_components(base, sizes);

  ConflictMap out;
  out.suspect.assign(f.total.size(), 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.total.size(); ++i) {
    if (labels[i] >= 0 && sizes[labels[i]] >= cfg.min_region_size) {
      out.suspect[i] = 1;
      ++out.suspect_count;
      sum += f.total[i];
    }
  }
  out.score = f.updated_count > 0 ? sum / f.updated_count : 0.0;
  return out;
}

}  // namespace

ConflictMap conflict_map(const FeatureField& f, const IndicatorConfig& cfg) {
  cfg.validate();
  if (cfg.kind == IndicatorKind::area) return area_map(f, cfg);

  const std::vector<double>& layer = f.layer(cfg);
  ConflictMap out;
  out.suspect.assign(layer.size(), 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < layer.size(); ++i) {
    if (f.updated[i] && layer[i] >= cfg.primary_threshold) {
      out.suspect[i] = 1;
      ++out.suspect_count;
      sum += layer[i];
    }
  }
  out.score = f.updated_count > 0 ? sum / f.updated_count : 0.0;
  return out;
}

double conflict_score(const FeatureField& f, const IndicatorConfig& cfg) {
  return conflict_map(f, cfg).score;
}

namespace {

// Descending feature values of the updated cells, with prefix sums, so a
// ladder of thresholds scores by binary search.
struct SortedLayer {
  std::vector<double> values;  // descending
  std::vector<double> prefix;  // prefix[i] = sum of the first i values
};

SortedLayer sort_layer(const FeatureField& f,
                       const std::vector<double>& layer) {
  SortedLayer s;
  s.values.reserve(f.updated_count);
  for (std::size_t i = 0; i < layer.size(); ++i) {
    if (f.updated[i]) s.values.push_back(layer[i]);
  }
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  s.prefix.resize(s.values.size() + 1);
  s.prefix[0] = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    s.prefix[i + 1] = s.prefix[i] + s.values[i];
  }
  return s;
}

double score_from_sorted(const SortedLayer& s, double threshold,
                         int updated_count) {
  if (updated_count <= 0) return 0.0;
  // First position whose value drops below the threshold.
  const auto it = std::partition_point(
      s.values.begin(), s.values.end(),
      [&](double v) { return v >= threshold; });
  const std::size_t count = static_cast<std::size_t>(it - s.values.begin());
  return s.prefix[count] / updated_count;
}

}  // namespace

std::vector<double> score_all(const FeatureField& f,
                              std::span<const IndicatorConfig> configs) {
  std::vector<double> scores(configs.size(), 0.0);

  // Shared sorted layers, built lazily per distinct layer.
  std::map<const std::vector<double>*, SortedLayer> sorted;
  // Area configs grouped by threshold, so one labeling serves all sizes.
  std::map<double, std::vector<std::size_t>> area_groups;

  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    const IndicatorConfig& cfg = configs[ci];
    cfg.validate();
    if (cfg.kind == IndicatorKind::area) {
      area_groups[cfg.primary_threshold].push_back(ci);
      continue;
    }
    const std::vector<double>* layer = &f.layer(cfg);
    auto [it, inserted] = sorted.try_emplace(layer);
    if (inserted) it->second = sort_layer(f, *layer);
    scores[ci] =
        score_from_sorted(it->second, cfg.primary_threshold, f.updated_count);
  }

  for (const auto& [threshold, members] : area_groups) {
    BinaryImage base(f.side, f.side);
    for (std::size_t i = 0; i < f.total.size(); ++i) {
      base.pixels[i] = f.updated[i] && f.total[i] >= threshold;
    }
    std::vector<int> sizes;
    const std::vector<int> labels = label_components(base, sizes);
    std::vector<double> component_sum(sizes.size(), 0.0);
    for (std::size_t i = 0; i < f.total.size(); ++i) {
      if (labels[i] >= 0) component_sum[labels[i]] += f.total[i];
    }
    for (const std::size_t ci : members) {
      const int min_size = configs[ci].min_region_size;
      double sum = 0.0;
      for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] >= min_size) sum += component_sum[c];
      }
      scores[ci] = f.updated_count > 0 ? sum / f.updated_count : 0.0;
    }
  }
  return scores;
}

}  // namespace evigrid
