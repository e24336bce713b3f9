#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evigrid/belief.hpp"
#include "evigrid/environment.hpp"
#include "evigrid/grid_spec.hpp"
#include "evigrid/image.hpp"
#include "evigrid/sensor_model.hpp"

namespace evigrid {

// Con magnitudes whose exceedance counts are tracked per cell.
inline constexpr std::array<double, 4> kConMagnitudes{0.5, 1.0, 1.5, 2.0};

// Index of a configured magnitude; unknown keys are a configuration error.
std::size_t con_magnitude_index(double magnitude);

// Per-cell conflict history.  Everything the indicators threshold is
// accumulated here, so no per-update log needs to be kept.
struct CellStats {
  std::int32_t n_updates = 0;
  std::int32_t n_conflicting = 0;       // updates with Con > 0
  double total_con = 0.0;               // running sum of Con
  double max_con = 0.0;                 // largest single-update Con
  double seq_sum = 0.0;                 // Con sum of the current trailing
  std::int32_t seq_len = 0;             //   run of conflicting updates
  std::array<std::int32_t, 4> magnitude_counts{};  // Con >= kConMagnitudes[i]
  std::int32_t contradiction_count = 0;  // confident-cell contradiction events
};

enum class TruthLabel : std::uint8_t { occupied, empty, excluded };

// Crisp ground truth, same geometry as the evidence grid it scores.
struct TruthGrid {
  GridSpec spec;
  int side = 0;
  std::vector<TruthLabel> labels;

  TruthGrid() = default;
  explicit TruthGrid(const GridSpec& s)
      : spec(s), side(s.cells_per_side()) {
    labels.assign(static_cast<std::size_t>(side) * side,
                  TruthLabel::excluded);
  }

  TruthLabel at(int ix, int iy) const {
    return labels[static_cast<std::size_t>(iy) * side + ix];
  }
  void set(int ix, int iy, TruthLabel v) {
    labels[static_cast<std::size_t>(iy) * side + ix] = v;
  }
  int count(TruthLabel v) const;
  // occupied = black, empty = white, excluded = mid gray
  void write_pgm(const std::string& path) const;
};

// Cells crossed by a wall segment are occupied, cells whose centers lie
// inside the corridor are empty, everything else (including beyond the
// walls) is excluded from scoring.  The wall list must form a closed
// loop; zero-length segments are ignored.
TruthGrid rasterize_truth(const Environment& env, const GridSpec& spec);

struct ScanSummary {
  int cells_touched = 0;  // distinct cells updated by the scan
  int cell_updates = 0;   // evidence applications (a cell may repeat)
  double total_con = 0.0;
};

enum class BeliefStream { normalized, unnormalized };
enum class BeliefChannel { occupied, empty, unknown, conflict };

// The evidential occupancy grid.  Two belief states are maintained per
// cell: a normalized (renormalizing) stream that the map quality and the
// Con bookkeeping read, and an unnormalized stream whose accumulating
// conflict mass drives the contradiction trigger.
class EvidenceGrid {
 public:
  explicit EvidenceGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int side() const { return side_; }
  std::size_t cell_count() const { return stats_.size(); }
  int updated_cell_count() const { return updated_cells_; }

  std::size_t index(int ix, int iy) const;  // bounds-checked

  const BeliefMass& dempster_at(int ix, int iy) const {
    return dempster_[index(ix, iy)];
  }
  const BeliefMass& smets_at(int ix, int iy) const {
    return smets_[index(ix, iy)];
  }
  const CellStats& stats_at(int ix, int iy) const {
    return stats_[index(ix, iy)];
  }

  std::span<const BeliefMass> dempster_all() const { return dempster_; }
  std::span<const BeliefMass> smets_all() const { return smets_; }
  std::span<const CellStats> stats_all() const { return stats_; }

  // Applies one piece of evidence to one cell: records the conflict
  // observation against the normalized state, advances both streams, and
  // evaluates the contradiction trigger.  Returns the recorded
  // observation (Con from the normalized stream, conflict-mass delta from
  // the unnormalized one).
  ConflictObservation apply_evidence(int ix, int iy,
                                     const BeliefMass& evidence);

  // Applies every footprint cell of every reading in the scan.  All
  // readings must share one sensor pose.
  ScanSummary update_from_scan(std::span<const RangeReading> scan,
                               const SensorModelParams& params);

  // Sum over scored cells (non-excluded truth, at least one update) of
  // the larger per-channel deviation of the normalized belief from truth.
  double error_score(const TruthGrid& truth) const;

  // Per-cell error of the scored cells scaled to 8 bits, zero elsewhere.
  GrayImage error_gray(const TruthGrid& truth) const;

  // error_gray binarized by the histogram threshold; constant gray
  // images produce an all-false result.
  BinaryImage error_image(const TruthGrid& truth) const;

  void write_channel_pgm(const std::string& path, BeliefStream stream,
                         BeliefChannel channel) const;
  void write_stats_csv(const std::string& path) const;

  // Trigger constants of the contradiction heuristic: the cell must hold
  // a confident single-hypothesis belief, and one update must raise the
  // unnormalized conflict mass by at least the rise threshold.
  static constexpr double kContradictionMinConfidence = 0.5;
  static constexpr double kContradictionMinConflictRise = 0.10;

 private:
  double cell_error(std::size_t idx, const TruthGrid& truth) const;

  GridSpec spec_;
  int side_ = 0;
  std::vector<BeliefMass> dempster_;
  std::vector<BeliefMass> smets_;
  std::vector<CellStats> stats_;
  std::vector<std::int32_t> touch_stamp_;
  std::int32_t scan_counter_ = 0;
  int updated_cells_ = 0;
};

}  // namespace evigrid
