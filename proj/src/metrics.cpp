#include "evigrid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evigrid/rng.hpp"

namespace evigrid {

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("correlation needs equal-length samples");
  }
  const std::size_t n = a.size();
  if (n < 2) {
    throw std::domain_error("correlation needs at least two pairs");
  }
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);

  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw std::domain_error("correlation of a constant sample is undefined");
  }
  return cov / std::sqrt(var_a * var_b);
}

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population
};

Moments moments(std::span<const double> xs) {
  Moments m;
  for (const double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (const double x : xs) {
    const double d = x - m.mean;
    m.variance += d * d;
  }
  m.variance /= static_cast<double>(xs.size());
  return m;
}

}  // namespace

double fld(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("separation needs two non-empty groups");
  }
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double spread = ma.variance + mb.variance;
  const double gap = ma.mean - mb.mean;
  if (spread == 0.0) {
    if (gap == 0.0) {
      throw std::domain_error(
          "separation of identical constant groups is undefined");
    }
    return std::numeric_limits<double>::infinity();
  }
  return gap * gap / spread;
}

namespace {

// One-dimensional squared distance transform (lower envelope of
// parabolas) over f[0..n); d receives min_j (i-j)^2 + f[j].
void squared_dt_1d(const std::vector<double>& f, int n,
                   std::vector<double>& d, std::vector<int>& v,
                   std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + q * static_cast<double>(q)) -
           (f[p] + p * static_cast<double>(p))) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const int p = v[k];
    const double dq = q - p;
    d[q] = dq * dq + f[p];
  }
}

// No real squared distance in the grid comes anywhere near this sentinel.
constexpr double kFarAway = 1e20;

}  // namespace

std::vector<double> distance_transform(const BinaryImage& on) {
  const int w = on.width;
  const int h = on.height;
  std::vector<double> dist(on.pixels.size(), 0.0);
  if (on.count() == 0) {
    std::fill(dist.begin(), dist.end(),
              std::numeric_limits<double>::infinity());
    return dist;
  }

  const int longest = std::max(w, h);
  std::vector<double> f(longest), d(longest), z(longest + 1);
  std::vector<int> v(longest);

  // Column pass: squared vertical distance to the nearest on-pixel.
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      f[y] = on.pixels[static_cast<std::size_t>(y) * w + x] ? 0.0 : kFarAway;
    }
    squared_dt_1d(f, h, d, v, z);
    for (int y = 0; y < h; ++y) {
      dist[static_cast<std::size_t>(y) * w + x] = d[y];
    }
  }
  // Row pass over the column results.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      f[x] = dist[static_cast<std::size_t>(y) * w + x];
    }
    squared_dt_1d(f, w, d, v, z);
    for (int x = 0; x < w; ++x) {
      dist[static_cast<std::size_t>(y) * w + x] = std::sqrt(d[x]);
    }
  }
  return dist;
}

PreparedDistances prepare_distances(const BinaryImage& img) {
  PreparedDistances out;
  out.width = img.width;
  out.height = img.height;
  out.empty = img.count() == 0;
  out.pixels = img.pixels;
  if (!out.empty) out.dist = distance_transform(img);
  return out;
}

Delta2Result baddeley_delta2(const PreparedDistances& a,
                             const PreparedDistances& b, double cutoff,
                             bool full_domain) {
  if (a.width != b.width || a.height != b.height) {
    throw std::invalid_argument("images must share dimensions");
  }
  if (!(cutoff > 0.0)) {
    throw std::invalid_argument("cutoff must be positive");
  }
  Delta2Result out;
  if (a.empty && b.empty) {
    out.both_empty = true;
    return out;  // no discrepancy to measure
  }

  double sum = 0.0;
  std::size_t domain = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    if (!full_domain && !a.pixels[i] && !b.pixels[i]) continue;
    const double wa = a.empty ? cutoff : std::min(a.dist[i], cutoff);
    const double wb = b.empty ? cutoff : std::min(b.dist[i], cutoff);
    const double diff = wa - wb;
    sum += diff * diff;
    ++domain;
  }
  out.value = domain > 0 ? std::sqrt(sum / static_cast<double>(domain)) : 0.0;
  return out;
}

Delta2Result baddeley_delta2(const BinaryImage& a, const BinaryImage& b,
                             double cutoff, bool full_domain) {
  return baddeley_delta2(prepare_distances(a), prepare_distances(b), cutoff,
                         full_domain);
}

namespace {

double lloyd_cost(std::span<const double> values,
                  std::vector<double>& centers, std::vector<int>& assign) {
  const int k = static_cast<int>(centers.size());
  const std::size_t n = values.size();
  std::vector<double> sums(k);
  std::vector<int> counts(k);
  double cost = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::abs(values[i] - centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = std::abs(values[i] - centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assign[i] = best;
      sums[best] += values[i];
      counts[best] += 1;
      cost += best_d * best_d;
    }
    bool moved = false;
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Revive an empty cluster at the point farthest from its center.
        std::size_t far_i = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = std::abs(values[i] - centers[assign[i]]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        centers[c] = values[far_i];
        moved = true;
        continue;
      }
      const double next = sums[c] / counts[c];
      if (next != centers[c]) {
        centers[c] = next;
        moved = true;
      }
    }
    if (!moved) break;
  }
  return cost;
}

}  // namespace

KMeansResult kmeans_1d(std::span<const double> values, int k, int restarts,
                       std::uint64_t seed) {
  const std::size_t n = values.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw std::invalid_argument("cluster count must be in [1, n]");
  }
  if (restarts < 1) {
    throw std::invalid_argument("at least one restart is required");
  }

  Rng rng(seed);
  KMeansResult best;
  best.cost = std::numeric_limits<double>::infinity();
  std::vector<double> centers(k);
  std::vector<int> assign(n);
  std::vector<double> d2(n);

  for (int r = 0; r < restarts; ++r) {
    // Distance-weighted greedy seeding.
    centers[0] = values[rng.uniform_index(n)];
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double nearest = std::abs(values[i] - centers[0]);
        for (int p = 1; p < c; ++p) {
          nearest = std::min(nearest, std::abs(values[i] - centers[p]));
        }
        d2[i] = nearest * nearest;
        total += d2[i];
      }
      if (total == 0.0) {
        centers[c] = values[rng.uniform_index(n)];
        continue;
      }
      double pick = rng.uniform01() * total;
      std::size_t chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        pick -= d2[i];
        if (pick <= 0.0) {
          chosen = i;
          break;
        }
      }
      centers[c] = values[chosen];
    }

    const double cost = lloyd_cost(values, centers, assign);
    if (cost < best.cost) {
      best.cost = cost;
      best.centers = centers;
      best.assignment = assign;
    }
  }

  // Relabel so centers ascend.
  std::vector<int> order(k);
  for (int c = 0; c < k; ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return best.centers[x] < best.centers[y];
  });
  std::vector<int> rank(k);
  for (int pos = 0; pos < k; ++pos) rank[order[pos]] = pos;
  std::vector<double> sorted_centers(k);
  for (int c = 0; c < k; ++c) sorted_centers[rank[c]] = best.centers[c];
  best.centers = std::move(sorted_centers);
  for (int& a : best.assignment) a = rank[a];
  return best;
}

}  // namespace evigrid
