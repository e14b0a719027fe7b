#pragma once

#include <cstdint>
#include <vector>

#include "deltachain/metric_system.hpp"

namespace deltachain {

using Coord = std::int64_t;

/// Finite window of an element of X^Z: entries[i] is coordinate origin + i.
class FiniteTrajectory {
 public:
  FiniteTrajectory(Coord origin, std::vector<PointId> entries);

  /// Trajectory starting at coordinate 0.
  static FiniteTrajectory from_zero(std::vector<PointId> entries) {
    return FiniteTrajectory(0, std::move(entries));
  }
  /// Orbit u, T(u), ..., T^{len-1}(u) placed at coordinates first..first+len-1.
  static FiniteTrajectory orbit(const FiniteMetricSystem& sys, PointId u, std::size_t len,
                                Coord first = 0);

  Coord origin() const noexcept { return origin_; }
  Coord first() const noexcept { return origin_; }
  Coord last() const noexcept { return origin_ + static_cast<Coord>(entries_.size()) - 1; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<PointId>& entries() const noexcept { return entries_; }

  bool covers(Coord lo, Coord hi) const noexcept { return lo >= first() && hi <= last(); }

  /// Coordinate k; throws InsufficientWindow outside the window.
  PointId at(Coord k) const;

  /// Throws InsufficientWindow unless all ids are valid for `sys`.
  void check_ids(const FiniteMetricSystem& sys) const;

  friend bool operator==(const FiniteTrajectory&, const FiniteTrajectory&) = default;

 private:
  Coord origin_;
  std::vector<PointId> entries_;
};

/// Throws InsufficientWindow if either trajectory misses a coordinate in [lo, hi].
void require_coverage(const FiniteTrajectory& x, const FiniteTrajectory& y, Coord lo, Coord hi);

/// Orbit segment over [a, b) read from `source`.
struct IntervalSegment {
  Coord a;
  Coord b;
  FiniteTrajectory source;
};

struct PiDistance {
  double value;  // exact sup when `exact`, otherwise the tail bound 1/(K+2)
  bool exact;
};

/// Product-metric distance between S^shift(x) and S^shift(y) evaluated on
/// coordinates |k| <= radius. Unseen terms are at most 1/(radius+2); when the
/// observed sup does not exceed that bound the bound is returned, inexact.
PiDistance pi_distance(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                       const FiniteTrajectory& y, std::int64_t radius, Coord shift = 0);

/// The truncated sup alone (no tail bound); used by estimators that track
/// the tail separately.
double pi_truncated(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                    const FiniteTrajectory& y, std::int64_t radius, Coord shift = 0);

/// Largest R with R + 1 <= max(1, 1/eps).
std::int64_t window_radius(double eps);

/// True iff rho(x_k, y_k) < eps for every |k| + 1 <= max(1, 1/eps), which
/// certifies pi(x, y) < eps.
bool window_check(const FiniteMetricSystem& sys, double eps, const FiniteTrajectory& x,
                  const FiniteTrajectory& y, Coord shift = 0);

}  // namespace deltachain
