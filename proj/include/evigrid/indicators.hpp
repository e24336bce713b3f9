#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evigrid/gridmap.hpp"

namespace evigrid {

// Per-cell conflict features that can flag a map as internally
// inconsistent.  Each kind reduces the cell's conflict history to one
// number; a cell is suspect when that number reaches the configured
// threshold, and a map's score is the suspect-weighted mean feature over
// all updated cells.
enum class IndicatorKind {
  total,              // running Con sum
  angular_norm,       // total scaled by the beam angular spacing
  range_norm,         // total scaled by the sensor range resolution
  update_rate_norm,   // total scaled by the mean updates per cell
  max_increase,       // largest single-update Con
  average,            // total / updates
  average_sequence,   // mean Con of the trailing conflicting run
  frequency,          // conflicting updates / updates
  increase_frequency, // updates with Con >= magnitude, / updates
  contradiction,      // confident-cell contradiction events
  area,               // total, gated by connected suspect-region size
};

inline constexpr int kIndicatorKindCount = 11;
inline constexpr std::array<IndicatorKind, kIndicatorKindCount>
    kAllIndicatorKinds{
        IndicatorKind::total,          IndicatorKind::angular_norm,
        IndicatorKind::range_norm,     IndicatorKind::update_rate_norm,
        IndicatorKind::max_increase,   IndicatorKind::average,
        IndicatorKind::average_sequence, IndicatorKind::frequency,
        IndicatorKind::increase_frequency, IndicatorKind::contradiction,
        IndicatorKind::area,
    };

std::string_view indicator_kind_name(IndicatorKind kind);
IndicatorKind indicator_kind_by_name(std::string_view name);  // throws

struct IndicatorConfig {
  IndicatorKind kind = IndicatorKind::total;
  double primary_threshold = 0.0;
  double magnitude = 0.0;    // increase_frequency: which Con magnitude bin
  int min_region_size = 0;   // area: smallest surviving suspect region

  void validate() const;  // throws std::invalid_argument
  // Human-readable identity, e.g. "increase-frequency[1.0]@0.35".
  std::string label() const;
};

// The standard evaluation set: every kind crossed with its threshold
// ladder (ladder rung i carries threshold i * step), the
// increase-frequency ladder repeated per magnitude and the area ladder
// repeated per region size.
std::vector<IndicatorConfig> enumerate_configs();

// Divisors shared by every cell of one map.
struct FeatureContext {
  double angular_spacing_deg = 1.0;  // degrees between adjacent beams
  double range_resolution_m = 1.0;
  double mean_updates = 0.0;         // mean n_updates over updated cells
};

// One cell's feature under one config; cells that never updated score 0.
double cell_feature(const IndicatorConfig& cfg, const CellStats& stats,
                    const FeatureContext& ctx);

// Dense per-kind feature layers for one grid, computed in a single pass so
// that scoring many configs stays cheap.
struct FeatureField {
  int side = 0;
  int updated_count = 0;
  FeatureContext context;
  std::vector<std::uint8_t> updated;         // n_updates >= 1
  std::vector<double> total;                 // also the area base layer
  std::vector<double> angular_norm;
  std::vector<double> range_norm;
  std::vector<double> update_rate_norm;
  std::vector<double> max_increase;
  std::vector<double> average;
  std::vector<double> average_sequence;
  std::vector<double> frequency;
  std::array<std::vector<double>, 4> increase_frequency;  // per magnitude
  std::vector<double> contradiction;

  const std::vector<double>& layer(const IndicatorConfig& cfg) const;
};

FeatureField compute_features(const EvidenceGrid& grid,
                              double angular_spacing_deg,
                              double range_resolution_m = 1.0);

// Suspect mask and score of one config.
struct ConflictMap {
  std::vector<std::uint8_t> suspect;
  int suspect_count = 0;
  double score = 0.0;  // mean over updated cells of (suspect ? feature : 0)
};

ConflictMap conflict_map(const FeatureField& field,
                         const IndicatorConfig& cfg);

double conflict_score(const FeatureField& field, const IndicatorConfig& cfg);

// Scores for many configs at once; equal to conflict_score per config but
// shares sorted prefix sums across a kind's threshold ladder and one
// region labeling across the area sizes of a threshold.
std::vector<double> score_all(const FeatureField& field,
                              std::span<const IndicatorConfig> configs);

}  // namespace evigrid
