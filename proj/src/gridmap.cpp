#include "evigrid/gridmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "evigrid/text.hpp"

namespace evigrid {

std::size_t con_magnitude_index(double magnitude) {
  for (std::size_t i = 0; i < kConMagnitudes.size(); ++i) {
    if (kConMagnitudes[i] == magnitude) return i;
  }
  throw std::invalid_argument("unconfigured conflict magnitude: " +
                              format_g17(magnitude));
}

int TruthGrid::count(TruthLabel v) const {
  return static_cast<int>(std::count(labels.begin(), labels.end(), v));
}

void TruthGrid::write_pgm(const std::string& path) const {
  GrayImage img(side, side);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    switch (labels[i]) {
      case TruthLabel::occupied: img.pixels[i] = 0; break;
      case TruthLabel::empty: img.pixels[i] = 255; break;
      case TruthLabel::excluded: img.pixels[i] = 128; break;
    }
  }
  evigrid::write_pgm(path, img,
                     "ground truth: 0 occupied, 255 empty, 128 excluded");
}

TruthGrid rasterize_truth(const Environment& env, const GridSpec& spec) {
  spec.validate();
  if (!is_closed_loop(env.walls)) {
    throw std::invalid_argument("truth rasterization needs a closed wall loop");
  }
  TruthGrid truth(spec);
  const int n = truth.side;
  const double cs = spec.cell_size;
  for (int iy = 0; iy < n; ++iy) {
    const double y0 = spec.min_y() + iy * cs;
    for (int ix = 0; ix < n; ++ix) {
      const double x0 = spec.min_x() + ix * cs;
      bool on_wall = false;
      for (const WallSegment& w : env.walls) {
        const double len2 = (w.b - w.a).dot(w.b - w.a);
        if (len2 == 0.0) continue;
        if (segment_intersects_rect(w.a, w.b, x0, y0, x0 + cs, y0 + cs)) {
          on_wall = true;
          break;
        }
      }
      if (on_wall) {
        truth.set(ix, iy, TruthLabel::occupied);
      } else if (point_in_polygon({spec.center_x(ix), spec.center_y(iy)},
                                  env.walls)) {
        truth.set(ix, iy, TruthLabel::empty);
      }
    }
  }
  return truth;
}

EvidenceGrid::EvidenceGrid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  side_ = spec_.cells_per_side();
  const std::size_t n = static_cast<std::size_t>(side_) * side_;
  dempster_.assign(n, BeliefMass::vacuous());
  smets_.assign(n, BeliefMass::vacuous());
  stats_.assign(n, CellStats{});
  touch_stamp_.assign(n, 0);
}

std::size_t EvidenceGrid::index(int ix, int iy) const {
  if (ix < 0 || iy < 0 || ix >= side_ || iy >= side_) {
    throw std::out_of_range("cell index outside the grid");
  }
  return static_cast<std::size_t>(iy) * side_ + ix;
}

namespace {

void record_conflict(CellStats& s, double con) {
  s.total_con += con;
  s.max_con = std::max(s.max_con, con);
  if (con > 0.0) {
    s.n_conflicting += 1;
    s.seq_len += 1;
    s.seq_sum += con;
    for (std::size_t i = 0; i < kConMagnitudes.size(); ++i) {
      if (con >= kConMagnitudes[i]) s.magnitude_counts[i] += 1;
    }
  } else {
    s.seq_len = 0;
    s.seq_sum = 0.0;
  }
}

}  // namespace

ConflictObservation EvidenceGrid::apply_evidence(int ix, int iy,
                                                 const BeliefMass& evidence) {
  if (!evidence.is_valid() || evidence.conflict != 0.0) {
    throw std::invalid_argument(
        "evidence must be a valid conflict-free mass assignment");
  }
  const std::size_t i = index(ix, iy);
  CellStats& s = stats_[i];

  ConflictObservation obs;
  try {
    const CombineResult r = combine_dempster(dempster_[i], evidence);
    obs = r.conflict;
    dempster_[i] = r.mass;
  } catch (const SaturationError& err) {
    // Total contradiction: record the capped weight and restart the cell.
    obs = err.observation;
    dempster_[i] = BeliefMass::vacuous();
  }
  record_conflict(s, obs.con);

  const BeliefMass& u = smets_[i];
  const bool confident =
      std::max(u.occupied, u.empty) >= kContradictionMinConfidence;
  const CombineResult sr = combine_smets(u, evidence);
  obs.smets_empty_delta = sr.conflict.smets_empty_delta;
  if (confident &&
      sr.conflict.smets_empty_delta >= kContradictionMinConflictRise) {
    s.contradiction_count += 1;
  }
  smets_[i] = sr.mass;

  if (s.n_updates == 0) ++updated_cells_;
  s.n_updates += 1;
  return obs;
}

ScanSummary EvidenceGrid::update_from_scan(
    std::span<const RangeReading> scan, const SensorModelParams& params) {
  params.validate();
  ScanSummary summary;
  if (scan.empty()) return summary;
  const Pose& pose = scan.front().sensor;
  for (const RangeReading& r : scan) {
    if (r.sensor.x != pose.x || r.sensor.y != pose.y ||
        r.sensor.heading != pose.heading) {
      throw std::invalid_argument("scan readings must share one pose");
    }
    if (!(r.range > 0.0) || r.range > params.max_range) {
      throw std::invalid_argument("reading range outside (0, max_range]");
    }
  }
  ++scan_counter_;
  for (const RangeReading& r : scan) {
    for (const FootprintCell& c : cells_in_footprint(r, params, spec_)) {
      const BeliefMass e =
          evidence_for_cell(c.range, c.bearing_offset, r.range, params);
      const ConflictObservation obs = apply_evidence(c.ix, c.iy, e);
      summary.total_con += obs.con;
      summary.cell_updates += 1;
      const std::size_t idx = static_cast<std::size_t>(c.iy) * side_ + c.ix;
      if (touch_stamp_[idx] != scan_counter_) {
        touch_stamp_[idx] = scan_counter_;
        summary.cells_touched += 1;
      }
    }
  }
  return summary;
}

double EvidenceGrid::cell_error(std::size_t idx,
                                const TruthGrid& truth) const {
  const BeliefMass& m = dempster_[idx];
  const double truth_o = truth.labels[idx] == TruthLabel::occupied ? 1.0 : 0.0;
  const double truth_e = truth.labels[idx] == TruthLabel::empty ? 1.0 : 0.0;
  return std::max(std::abs(m.occupied - truth_o),
                  std::abs(m.empty - truth_e));
}

double EvidenceGrid::error_score(const TruthGrid& truth) const {
  if (truth.side != side_) {
    throw std::invalid_argument("truth grid dimensions do not match");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    if (stats_[i].n_updates < 1) continue;
    if (truth.labels[i] == TruthLabel::excluded) continue;
    total += cell_error(i, truth);
  }
  return total;
}

GrayImage EvidenceGrid::error_gray(const TruthGrid& truth) const {
  if (truth.side != side_) {
    throw std::invalid_argument("truth grid dimensions do not match");
  }
  GrayImage img(side_, side_);
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    if (stats_[i].n_updates < 1) continue;
    if (truth.labels[i] == TruthLabel::excluded) continue;
    const double e = std::clamp(cell_error(i, truth), 0.0, 1.0);
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(e * 255.0));
  }
  return img;
}

BinaryImage EvidenceGrid::error_image(const TruthGrid& truth) const {
  return binarize_otsu(error_gray(truth));
}

void EvidenceGrid::write_channel_pgm(const std::string& path,
                                     BeliefStream stream,
                                     BeliefChannel channel) const {
  const std::vector<BeliefMass>& src =
      stream == BeliefStream::normalized ? dempster_ : smets_;
  GrayImage img(side_, side_);
  for (std::size_t i = 0; i < src.size(); ++i) {
    double v = 0.0;
    switch (channel) {
      case BeliefChannel::occupied: v = src[i].occupied; break;
      case BeliefChannel::empty: v = src[i].empty; break;
      case BeliefChannel::unknown: v = src[i].unknown; break;
      case BeliefChannel::conflict: v = src[i].conflict; break;
    }
    img.pixels[i] =
        static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  }
  write_pgm(path, img, "belief mass, linear scale: 255 = mass 1.0");
}

void EvidenceGrid::write_stats_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "ix,iy,n_updates,n_conflicting,total_con,max_con,seq_sum,seq_len,"
         "count_ge_0.5,count_ge_1.0,count_ge_1.5,count_ge_2.0,"
         "contradictions\n";
  for (int iy = 0; iy < side_; ++iy) {
    for (int ix = 0; ix < side_; ++ix) {
      const CellStats& s = stats_[static_cast<std::size_t>(iy) * side_ + ix];
      if (s.n_updates < 1) continue;
      out << ix << ',' << iy << ',' << s.n_updates << ','
          << s.n_conflicting << ',' << format_g17(s.total_con) << ','
          << format_g17(s.max_con) << ',' << format_g17(s.seq_sum) << ','
          << s.seq_len;
      for (const std::int32_t c : s.magnitude_counts) out << ',' << c;
      out << ',' << s.contradiction_count << '\n';
    }
  }
  if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace evigrid
