#include "deltachain/consistency.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "deltachain/shadowing.hpp"
#include "deltachain/trajectory.hpp"

namespace deltachain {
namespace {

// Periodic sequence word^Z on [-radius, horizon - 1 + radius], read from
// offset `rotation`.
FiniteTrajectory periodic_window(const Word& word, std::size_t rotation, std::size_t horizon,
                                 std::int64_t radius) {
  const std::size_t p = word.size();
  const std::size_t len = horizon + 2 * static_cast<std::size_t>(radius);
  std::vector<PointId> entries(len);
  // coordinate -radius sits at offset rotation - radius (mod p)
  const std::size_t start =
      (rotation + p * (static_cast<std::size_t>(radius) / p + 1) - static_cast<std::size_t>(radius) % p) % p;
  for (std::size_t i = 0; i < len; ++i) entries[i] = word[(start + i) % p];
  return FiniteTrajectory(-radius, std::move(entries));
}

double directed_besicovitch(const std::vector<PeriodicOrbitMeasure>& from,
                            const std::vector<PeriodicOrbitMeasure>& to,
                            const FiniteMetricSystem& sys, std::int64_t radius) {
  double sup = 0.0;
  for (const auto& mu : from) {
    double inf = 1.0;
    for (const auto& nu : to) {
      const std::size_t horizon = std::lcm(mu.period(), nu.period());
      const FiniteTrajectory y = periodic_window(mu.word(), 0, horizon, radius);
      for (std::size_t r = 0; r < nu.period() && inf > sup; ++r) {
        const FiniteTrajectory z = periodic_window(nu.word(), r, horizon, radius);
        inf = std::min(inf, besicovitch_pi(sys, y, z, horizon, radius).value);
      }
      if (inf <= sup) break;
    }
    sup = std::max(sup, inf);
  }
  return sup;
}

}  // namespace

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t cap, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (n <= cap) return idx;
  // partial Fisher-Yates with an explicit draw so the result does not
  // depend on the standard library's shuffle
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  return idx;
}

RealMatrix pi_bar_matrix(const std::vector<PeriodicOrbitMeasure>& a,
                         const std::vector<PeriodicOrbitMeasure>& b,
                         const FiniteMetricSystem& sys, std::int64_t radius, unsigned threads) {
  RealMatrix d(a.size(), b.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(a.size(), 1)));
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < a.size(); i += threads) {
      for (std::size_t j = 0; j < b.size(); ++j) d(i, j) = pi_bar_periodic(a[i], b[j], sys, radius).value;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();
  return d;
}

OneSidedCheck besicovitch_one_sided_check(const std::vector<PeriodicOrbitMeasure>& a,
                                          const std::vector<PeriodicOrbitMeasure>& b,
                                          const RealMatrix& d, const FiniteMetricSystem& sys,
                                          std::int64_t radius) {
  OneSidedCheck out;
  out.hausdorff = hausdorff_distance(d);
  out.besicovitch_bound = std::max(directed_besicovitch(a, b, sys, radius),
                                   directed_besicovitch(b, a, sys, radius));
  out.holds = out.hausdorff <= out.besicovitch_bound + 1e-9;
  return out;
}

HullCheck ergodic_hull_check(const RealMatrix& d, std::size_t mixture_samples,
                             std::mt19937_64& rng, double tolerance) {
  HullCheck out;
  out.ergodic = hausdorff_distance(d);

  RealMatrix dt(d.cols(), d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) dt(j, i) = d(i, j);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto side = [&](const RealMatrix& m) {
    const std::size_t n = m.rows();
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> w(n, 0.0);
      w[i] = 1.0;
      sup = std::max(sup, distance_to_hull(w, m));
    }
    for (std::size_t s = 0; s < mixture_samples && n > 1; ++s) {
      std::vector<double> w(n, 0.0);
      const std::size_t parts = 2 + static_cast<std::size_t>(rng() % std::min<std::size_t>(n - 1, 2));
      double total = 0.0;
      for (std::size_t k = 0; k < parts; ++k) {
        const double x = 0.05 + unit(rng);
        w[rng() % n] += x;
        total += x;
      }
      for (double& x : w) x /= total;
      sup = std::max(sup, distance_to_hull(w, m));
      ++out.mixtures;
    }
    return sup;
  };
  out.full = std::max(side(d), side(dt));
  out.difference = std::abs(out.full - out.ergodic);
  out.holds = out.difference <= tolerance;
  return out;
}

}  // namespace deltachain
