#include "deltachain/shadowing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "deltachain/error.hpp"

namespace deltachain {

const char* to_string(PseudoOrbitKind kind) noexcept {
  switch (kind) {
    case PseudoOrbitKind::DeltaChain: return "delta_chain";
    case PseudoOrbitKind::DeltaAverage: return "delta_average";
    case PseudoOrbitKind::AsymptoticAverage: return "asymptotic_average";
  }
  return "unknown";
}

const char* to_string(BesicovitchVariant variant) noexcept {
  switch (variant) {
    case BesicovitchVariant::RhoB: return "rho_B";
    case BesicovitchVariant::PiB: return "pi_B";
    case BesicovitchVariant::HatRho: return "hat_rho";
    case BesicovitchVariant::HatPi: return "hat_pi";
  }
  return "unknown";
}

std::vector<double> step_errors(const FiniteMetricSystem& sys, const FiniteTrajectory& seq) {
  seq.check_ids(sys);
  if (seq.first() > 0) {
    throw Error(ErrorKind::InsufficientWindow, "pseudo-orbits are read from coordinate 0");
  }
  std::vector<double> errors;
  for (Coord j = 0; j < seq.last(); ++j) {
    errors.push_back(sys.dist(sys.map(seq.at(j)), seq.at(j + 1)));
  }
  return errors;
}

PseudoOrbitReport validate_pseudo_orbit(const FiniteMetricSystem& sys, const FiniteTrajectory& seq,
                                        PseudoOrbitKind kind, double delta,
                                        std::size_t min_window,
                                        const ToleranceSchedule& schedule) {
  const std::vector<double> errors = step_errors(sys, seq);
  const std::size_t steps = errors.size();
  if (steps == 0) throw Error(ErrorKind::BadHorizon, "need at least two coordinates");

  PseudoOrbitReport report{kind, delta, steps, std::nullopt, {}};

  switch (kind) {
    case PseudoOrbitKind::DeltaChain: {
      for (std::size_t j = 0; j < steps; ++j) {
        if (!lt_tol(errors[j], delta)) {
          report.witness = PseudoOrbitWitness{j, 1, errors[j]};
          break;
        }
      }
      report.verdict = report.passed() ? "verified" : "violated";
      break;
    }
    case PseudoOrbitKind::DeltaAverage: {
      if (min_window == 0 || min_window > steps) {
        std::ostringstream os;
        os << "minimal window " << min_window << " outside [1, " << steps << "]";
        throw Error(ErrorKind::BadHorizon, os.str());
      }
      std::vector<double> prefix(steps + 1, 0.0);
      for (std::size_t j = 0; j < steps; ++j) prefix[j + 1] = prefix[j] + errors[j];
      for (std::size_t n = min_window; n <= steps && !report.witness; ++n) {
        for (std::size_t k = 0; k + n <= steps; ++k) {
          const double mean = (prefix[k + n] - prefix[k]) / static_cast<double>(n);
          if (!lt_tol(mean, delta)) {
            report.witness = PseudoOrbitWitness{k, n, mean};
            break;
          }
        }
      }
      report.verdict = report.passed() ? "verified at horizon" : "violated";
      break;
    }
    case PseudoOrbitKind::AsymptoticAverage: {
      if (!schedule) throw Error(ErrorKind::BadHorizon, "asymptotic check needs a schedule");
      double sum = 0.0;
      const std::size_t start = (steps + 1) / 2;
      for (std::size_t n = 1; n <= steps; ++n) {
        sum += errors[n - 1];
        if (n < std::max<std::size_t>(start, 1)) continue;
        const double mean = sum / static_cast<double>(n);
        if (!lt_tol(mean, schedule(n))) {
          report.witness = PseudoOrbitWitness{0, n, mean};
          break;
        }
      }
      report.verdict = report.passed() ? "consistent at horizon" : "inconsistent at horizon";
      break;
    }
  }
  return report;
}

BesicovitchEstimate besicovitch_rho(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                                    const FiniteTrajectory& y, std::size_t horizon) {
  if (horizon == 0) throw Error(ErrorKind::BadHorizon, "horizon must be positive");
  require_coverage(x, y, 0, static_cast<Coord>(horizon) - 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < horizon; ++j) {
    sum += sys.dist(x.at(static_cast<Coord>(j)), y.at(static_cast<Coord>(j)));
  }
  return {sum / static_cast<double>(horizon), horizon, BesicovitchVariant::RhoB, 0.0};
}

BesicovitchEstimate besicovitch_pi(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                                   const FiniteTrajectory& y, std::size_t horizon,
                                   std::int64_t radius) {
  if (horizon == 0) throw Error(ErrorKind::BadHorizon, "horizon must be positive");
  require_coverage(x, y, -radius, static_cast<Coord>(horizon) - 1 + radius);
  double sum = 0.0;
  for (std::size_t j = 0; j < horizon; ++j) {
    sum += pi_distance(sys, x, y, radius, static_cast<Coord>(j)).value;
  }
  return {sum / static_cast<double>(horizon), horizon, BesicovitchVariant::PiB,
          1.0 / static_cast<double>(radius + 2)};
}

double density_infimum(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::BadHorizon, "horizon must be positive");
  const double n = static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  // Between consecutive distinct values (lower, upper] the exceedance count
  // is the number of values above `lower`. The qualifying set is an up-set,
  // so the first interval that admits a delta gives the infimum.
  double lower = 0.0;
  std::size_t idx = 0;
  while (idx < values.size() && values[idx] <= kDistanceTolerance) ++idx;
  while (idx < values.size()) {
    const double upper = values[idx];
    const double density = static_cast<double>(values.size() - idx) / n;
    if (density < upper) return std::max(lower, density);
    lower = upper;
    while (idx < values.size() && values[idx] <= upper + kDistanceTolerance) ++idx;
  }
  return lower;
}

BesicovitchEstimate hat_rho(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                            const FiniteTrajectory& y, std::size_t horizon) {
  if (horizon == 0) throw Error(ErrorKind::BadHorizon, "horizon must be positive");
  require_coverage(x, y, 0, static_cast<Coord>(horizon) - 1);
  std::vector<double> values(horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    values[k] = sys.dist(x.at(static_cast<Coord>(k)), y.at(static_cast<Coord>(k)));
  }
  return {density_infimum(std::move(values)), horizon, BesicovitchVariant::HatRho, 0.0};
}

BesicovitchEstimate hat_pi(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                           const FiniteTrajectory& y, std::size_t horizon, std::int64_t radius) {
  if (horizon == 0) throw Error(ErrorKind::BadHorizon, "horizon must be positive");
  require_coverage(x, y, -radius, static_cast<Coord>(horizon) - 1 + radius);
  std::vector<double> values(horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    values[k] = pi_distance(sys, x, y, radius, static_cast<Coord>(k)).value;
  }
  return {density_infimum(std::move(values)), horizon, BesicovitchVariant::HatPi,
          1.0 / static_cast<double>(radius + 2)};
}

EquivalenceCheck equivalence_bound_check(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                                         const FiniteTrajectory& y, std::size_t horizon,
                                         double delta) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1]");
  }
  if (horizon == 0) throw Error(ErrorKind::BadHorizon, "horizon must be positive");
  const std::int64_t window = window_radius(delta);
  const double delta_prime = delta / static_cast<double>(2 * window + 1);
  const Coord last = static_cast<Coord>(horizon) - 1;
  require_coverage(x, y, -window, last + window);

  EquivalenceCheck check{window, delta_prime, 0, 0, 0, false};
  for (Coord k = 0; k <= last; ++k) {
    // Terms with |j| > window are capped below delta, so the radius-window
    // sup decides pi >= delta exactly.
    if (!lt_tol(pi_truncated(sys, x, y, window, k), delta)) ++check.pi_count;
    if (!lt_tol(sys.dist(x.at(k), y.at(k)), delta)) ++check.rho_count;
  }
  for (Coord n = -window; n <= last + window; ++n) {
    if (!lt_tol(sys.dist(x.at(n), y.at(n)), delta_prime)) ++check.rho_prime_count;
  }
  const auto spread = static_cast<std::size_t>(2 * window + 1);
  check.holds = check.pi_count <= spread * check.rho_prime_count &&
                check.pi_count >= check.rho_count;
  return check;
}

AverageTracer best_average_tracer(const FiniteMetricSystem& sys, const FiniteTrajectory& p,
                                  std::size_t horizon) {
  if (horizon == 0) throw Error(ErrorKind::BadHorizon, "horizon must be positive");
  if (!p.covers(0, static_cast<Coord>(horizon) - 1)) {
    throw Error(ErrorKind::InsufficientWindow, "trajectory must cover [0, N-1]");
  }
  p.check_ids(sys);
  AverageTracer best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t z = 0; z < sys.size(); ++z) {
    PointId point = static_cast<PointId>(z);
    double sum = 0.0;
    for (std::size_t j = 0; j < horizon; ++j) {
      sum += sys.dist(point, p.at(static_cast<Coord>(j)));
      point = sys.map(point);
    }
    const double average = sum / static_cast<double>(horizon);
    if (average < best.average - kDistanceTolerance) best = {static_cast<PointId>(z), average};
  }
  return best;
}

}  // namespace deltachain
