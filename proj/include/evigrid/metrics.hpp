#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evigrid/image.hpp"

namespace evigrid {

// Pearson correlation of two equal-length samples.  Throws
// std::domain_error when fewer than two pairs exist or either sample is
// constant, and std::invalid_argument on length mismatch.
double pearson(std::span<const double> a, std::span<const double> b);

// Fisher-style separation of two one-dimensional groups:
// |mean difference|^2 / (variance_a + variance_b), population variances.
// Both groups constant: distinct means give +infinity, equal means are
// undefined and throw std::domain_error.  Empty groups throw
// std::invalid_argument.
double fld(std::span<const double> a, std::span<const double> b);

// Exact Euclidean distance to the nearest on-pixel, per pixel.  An image
// with no on-pixels yields +infinity everywhere.
std::vector<double> distance_transform(const BinaryImage& on);

struct Delta2Result {
  double value = 0.0;
  bool both_empty = false;
};

// Baddeley-style L2 discrepancy of two binary images: the root mean
// squared difference of the cutoff distance transforms min(d, cutoff),
// averaged over the union of the two highlight sets (or over every pixel
// with full_domain).  An empty image contributes the cutoff everywhere;
// two empty images are flagged and score 0.
Delta2Result baddeley_delta2(const BinaryImage& a, const BinaryImage& b,
                             double cutoff = 100.0, bool full_domain = false);

// One side of a baddeley_delta2 comparison with its distance transform
// precomputed, for scoring many images against a common reference.
struct PreparedDistances {
  int width = 0;
  int height = 0;
  bool empty = true;
  std::vector<std::uint8_t> pixels;  // 0/1 highlight mask
  std::vector<double> dist;          // left empty for an empty image
};

PreparedDistances prepare_distances(const BinaryImage& img);

Delta2Result baddeley_delta2(const PreparedDistances& a,
                             const PreparedDistances& b,
                             double cutoff = 100.0, bool full_domain = false);

struct KMeansResult {
  std::vector<double> centers;   // ascending
  std::vector<int> assignment;   // per input, index into centers
  double cost = 0.0;             // sum of squared deviations
};

// 1-D k-means: greedy distance-weighted seeding plus Lloyd refinement,
// best of `restarts` deterministic restarts.
KMeansResult kmeans_1d(std::span<const double> values, int k,
                       int restarts = 100, std::uint64_t seed = 1234567);

// A map counts as accurate when its error score stays below this limit.
inline constexpr double kAccurateErrorLimit = 300.0;

inline bool map_is_accurate(double error_score) {
  return error_score < kAccurateErrorLimit;
}

}  // namespace evigrid
