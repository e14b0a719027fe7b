#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deltachain/matrix.hpp"

namespace deltachain {

/// Absolute slack used for every threshold comparison on distances.
inline constexpr double kDistanceTolerance = 1e-12;

/// a <= b up to kDistanceTolerance.
inline bool leq_tol(double a, double b) noexcept { return a <= b + kDistanceTolerance; }
/// a < b, with values within kDistanceTolerance of b treated as equal.
inline bool lt_tol(double a, double b) noexcept { return a < b - kDistanceTolerance; }

using PointId = std::int32_t;

/// Result of normalize_metric: the clamped matrix and whether any entry
/// actually exceeded 1.
struct NormalizedMetric {
  RealMatrix matrix;
  bool clamped = false;
};

/// Validates a raw metric and clamps it entrywise to min(1, d).
/// Throws Error(NotAMetric) naming the offending pair or triple.
NormalizedMetric normalize_metric(const RealMatrix& raw);

/// Finite compact metric space with a self-map, distances in [0, 1].
class FiniteMetricSystem {
 public:
  /// Validates all invariants; dist must already be normalized.
  FiniteMetricSystem(RealMatrix dist, std::vector<PointId> map_image,
                     std::vector<std::string> labels = {});

  /// Normalizes `raw` before construction.
  static FiniteMetricSystem from_raw(const RealMatrix& raw, std::vector<PointId> map_image,
                                     std::vector<std::string> labels = {},
                                     bool* clamped = nullptr);

  std::size_t size() const noexcept { return map_.size(); }
  double dist(PointId u, PointId v) const { return dist_(u, v); }
  PointId map(PointId u) const { return map_[u]; }
  const std::string& label(PointId u) const { return labels_[u]; }

  const RealMatrix& distances() const noexcept { return dist_; }
  const std::vector<PointId>& map_image() const noexcept { return map_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool valid_id(PointId u) const noexcept {
    return u >= 0 && static_cast<std::size_t>(u) < map_.size();
  }

  /// T^k(u).
  PointId iterate(PointId u, std::size_t k) const;

 private:
  RealMatrix dist_;
  std::vector<PointId> map_;
  std::vector<std::string> labels_;
};

inline constexpr std::size_t kDefaultProductCap = 1u << 14;

/// Product with the max metric and componentwise map. Point (a, b) gets id
/// a * |B| + b. Throws SizeOverflow above `cap` points.
FiniteMetricSystem product_system(const FiniteMetricSystem& a, const FiniteMetricSystem& b,
                                  std::size_t cap = kDefaultProductCap);

struct SurjectiveCore {
  std::vector<PointId> ids;     // ascending ids of the eventual image
  FiniteMetricSystem system;    // restriction; core id i is original ids[i]
};

/// Eventual image of the map, where it acts as a permutation.
SurjectiveCore surjective_core(const FiniteMetricSystem& sys);

// Built-in discretizations.

/// Points k/n on the unit circle with arc-length distance; identity map.
RealMatrix circle_grid_metric(std::size_t n);
/// Points k/(n-1) on [0, 1] with |x - y|.
RealMatrix line_grid_metric(std::size_t n);
std::vector<std::string> grid_labels(std::size_t n, std::size_t denominator);

/// x -> 2x mod 1 on the n-point circle grid.
FiniteMetricSystem circle_doubling(std::size_t n);
/// x -> x + k/n mod 1 on the n-point circle grid.
FiniteMetricSystem circle_rotation(std::size_t n, std::int64_t k);
/// Uniform points in the unit square (Euclidean, clamped) with a uniformly
/// random self-map, both drawn from mt19937_64(seed).
FiniteMetricSystem random_metric_system(std::size_t n, std::uint64_t seed);

}  // namespace deltachain
