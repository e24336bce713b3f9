#pragma once

// Brute-force reference implementations used only by tests.  Each oracle
// recomputes a result from first principles by a different method than the
// library (exhaustive enumeration, dynamic programming, O(n^2) scans) so
// that agreement is meaningful.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "evigrid/belief.hpp"
#include "evigrid/rng.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Evidence combination via power-set enumeration.
//
// Subsets of the frame {O, E} are encoded as 2-bit masks: 0b00 = empty set,
// 0b01 = {O}, 0b10 = {E}, 0b11 = frame.  Set intersection is bitwise AND.
// ---------------------------------------------------------------------------

using MassVec = std::array<double, 4>;  // indexed by subset mask

inline MassVec to_vec(const evigrid::BeliefMass& m) {
  return MassVec{m.conflict, m.occupied, m.empty, m.unknown};
}

inline evigrid::BeliefMass to_mass(const MassVec& v) {
  evigrid::BeliefMass m;
  m.conflict = v[0];
  m.occupied = v[1];
  m.empty = v[2];
  m.unknown = v[3];
  return m;
}

struct CombineRef {
  MassVec mass{};
  double k = 0.0;
};

inline CombineRef combine_conjunctive(const MassVec& a, const MassVec& b,
                                      bool normalize) {
  CombineRef out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out.mass[i & j] += a[i] * b[j];
    }
  }
  out.k = out.mass[0];
  if (normalize) {
    out.mass[0] = 0.0;
    const double scale = 1.0 / (1.0 - out.k);
    for (double& v : out.mass) v *= scale;
  }
  return out;
}

// Conflict factor of combining three masses jointly: total product mass on
// triples whose three-way intersection is empty.
inline double joint_conflict_k3(const MassVec& a, const MassVec& b,
                                const MassVec& c) {
  double k = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int l = 0; l < 4; ++l) {
        if ((i & j & l) == 0) k += a[i] * b[j] * c[l];
      }
    }
  }
  return k;
}

// Random valid mass assignment (Dirichlet(1) over the chosen focal set).
inline evigrid::BeliefMass random_mass(evigrid::Rng& rng,
                                       bool allow_conflict = false) {
  const int n = allow_conflict ? 4 : 3;
  std::array<double, 4> draw{};
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    draw[i] = -std::log(1.0 - rng.uniform01());
    total += draw[i];
  }
  evigrid::BeliefMass m;
  m.occupied = draw[0] / total;
  m.empty = draw[1] / total;
  m.unknown = draw[2] / total;
  m.conflict = allow_conflict ? draw[3] / total : 0.0;
  return m;
}

// ---------------------------------------------------------------------------
// Exhaustive Otsu threshold search: maximize between-class variance over all
// candidate 8-bit thresholds by recomputing both class statistics directly.
// ---------------------------------------------------------------------------

inline int otsu_threshold_exhaustive(const std::vector<std::uint8_t>& gray) {
  int best_t = 0;
  double best_var = -1.0;
  for (int t = 0; t < 256; ++t) {
    double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (std::uint8_t g : gray) {
      if (g <= t) {
        n0 += 1;
        s0 += g;
      } else {
        n1 += 1;
        s1 += g;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const double mu0 = s0 / n0;
    const double mu1 = s1 / n1;
    const double n = n0 + n1;
    const double var = (n0 / n) * (n1 / n) * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return best_var < 0.0 ? -1 : best_t;  // -1: constant image
}

// ---------------------------------------------------------------------------
// Brute-force Euclidean distance transform, O(n^2) over pixel pairs.
// ---------------------------------------------------------------------------

inline std::vector<double> edt_brute_force(const std::vector<std::uint8_t>& on,
                                           int width, int height) {
  std::vector<double> dist(on.size(),
                           std::numeric_limits<double>::infinity());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
          if (!on[static_cast<std::size_t>(v) * width + u]) continue;
          const double dx = x - u;
          const double dy = y - v;
          best = std::min(best, dx * dx + dy * dy);
        }
      }
      dist[static_cast<std::size_t>(y) * width + x] = std::sqrt(best);
    }
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Connected components by explicit flood fill (8-connexity), returning the
// sorted list of component sizes.
// ---------------------------------------------------------------------------

inline std::vector<int> component_sizes_flood(
    const std::vector<std::uint8_t>& on, int width, int height) {
  std::vector<std::uint8_t> seen(on.size(), 0);
  std::vector<int> sizes;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * width + x;
      if (!on[idx] || seen[idx]) continue;
      int size = 0;
      stack.push_back({x, y});
      seen[idx] = 1;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        ++size;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
            const std::size_t nidx =
                static_cast<std::size_t>(ny) * width + nx;
            if (on[nidx] && !seen[nidx]) {
              seen[nidx] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      sizes.push_back(size);
    }
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

// ---------------------------------------------------------------------------
// Optimal 1-D k-means by dynamic programming over sorted values (exact
// within-cluster sum of squares, contiguous-cluster property).
// ---------------------------------------------------------------------------

inline double kmeans_1d_optimal_cost(std::vector<double> values, int k) {
  std::sort(values.begin(), values.end());
  const int n = static_cast<int>(values.size());
  std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + values[i];
    prefix_sq[i + 1] = prefix_sq[i] + values[i] * values[i];
  }
  // Cost of one cluster over the half-open index range [i, j).
  auto segment_cost = [&](int i, int j) {
    const double s = prefix[j] - prefix[i];
    const double sq = prefix_sq[j] - prefix_sq[i];
    const int m = j - i;
    return sq - s * s / m;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dp(
      k + 1, std::vector<double>(n + 1, inf));
  dp[0][0] = 0.0;
  for (int c = 1; c <= k; ++c) {
    for (int j = 1; j <= n; ++j) {
      for (int i = c - 1; i < j; ++i) {
        if (dp[c - 1][i] == inf) continue;
        dp[c][j] = std::min(dp[c][j], dp[c - 1][i] + segment_cost(i, j));
      }
    }
  }
  return dp[k][n];
}

// ---------------------------------------------------------------------------
// Ray vs segment set by direct per-segment intersection arithmetic.
// ---------------------------------------------------------------------------

struct RayHitRef {
  bool hit = false;
  double distance = std::numeric_limits<double>::infinity();
};

inline RayHitRef ray_nearest_segment(double px, double py, double dx,
                                     double dy,
                                     const std::vector<std::array<double, 4>>&
                                         segments) {
  RayHitRef out;
  for (const auto& s : segments) {
    const double ex = s[2] - s[0];
    const double ey = s[3] - s[1];
    const double denom = dx * ey - dy * ex;
    if (std::abs(denom) < 1e-15) continue;
    const double qx = s[0] - px;
    const double qy = s[1] - py;
    const double t = (qx * ey - qy * ex) / denom;   // along ray
    const double u = (qx * dy - qy * dx) / denom;   // along segment
    if (t > 1e-12 && u >= 0.0 && u <= 1.0 && t < out.distance) {
      out.hit = true;
      out.distance = t;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point-in-polygon by ray crossing count (even-odd rule).
// ---------------------------------------------------------------------------

inline bool point_in_polygon_crossing(
    double x, double y, const std::vector<std::array<double, 2>>& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double xi = poly[i][0], yi = poly[i][1];
    const double xj = poly[j][0], yj = poly[j][1];
    if ((yi > y) != (yj > y)) {
      const double x_cross = (xj - xi) * (y - yi) / (yj - yi) + xi;
      if (x < x_cross) inside = !inside;
    }
  }
  return inside;
}

}  // namespace oracle
