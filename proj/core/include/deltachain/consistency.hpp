#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "deltachain/matrix.hpp"
#include "deltachain/measures.hpp"
#include "deltachain/metric_system.hpp"

namespace deltachain {

/// All indices when n <= cap, otherwise `cap` distinct indices drawn from rng,
/// returned ascending.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t cap, std::mt19937_64& rng);

/// pi-bar between every pair (rows from a, columns from b). Rows are filled
/// in parallel; each cell is independent so the result does not depend on
/// the thread count.
RealMatrix pi_bar_matrix(const std::vector<PeriodicOrbitMeasure>& a,
                         const std::vector<PeriodicOrbitMeasure>& b,
                         const FiniteMetricSystem& sys, std::int64_t radius,
                         unsigned threads = 0);

/// Sampled one-sided comparison: the Hausdorff distance of `d` against the
/// same sup-inf taken over explicit periodic points and finite-horizon
/// pi_B, with every rotation of the inner word tried and horizon lcm(p, q).
struct OneSidedCheck {
  double hausdorff = 0.0;
  double besicovitch_bound = 0.0;
  bool holds = true;
};

OneSidedCheck besicovitch_one_sided_check(const std::vector<PeriodicOrbitMeasure>& a,
                                          const std::vector<PeriodicOrbitMeasure>& b,
                                          const RealMatrix& d, const FiniteMetricSystem& sys,
                                          std::int64_t radius);

/// Hausdorff distance between the ergodic sets versus the full sets: each
/// side gains sampled finite mixtures of its ergodic measures, and the inner
/// infimum runs over the convex hull of the other side.
struct HullCheck {
  double ergodic = 0.0;
  double full = 0.0;
  double difference = 0.0;
  std::size_t mixtures = 0;
  bool holds = true;
};

HullCheck ergodic_hull_check(const RealMatrix& d, std::size_t mixture_samples,
                             std::mt19937_64& rng, double tolerance = 0.05);

}  // namespace deltachain
