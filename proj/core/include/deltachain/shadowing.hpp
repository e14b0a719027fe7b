#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "deltachain/metric_system.hpp"
#include "deltachain/trajectory.hpp"

namespace deltachain {

enum class PseudoOrbitKind { DeltaChain, DeltaAverage, AsymptoticAverage };

const char* to_string(PseudoOrbitKind kind) noexcept;

struct PseudoOrbitWitness {
  std::size_t index;   // first step (or window offset) that failed
  std::size_t length;  // window length; 1 for single-step failures
  double value;        // offending step error or window average
};

/// Outcome of a finite-horizon pseudo-orbit validation. The asymptotic kind
/// can only ever be "consistent at horizon"; `verdict` says which.
struct PseudoOrbitReport {
  PseudoOrbitKind kind;
  double parameter;
  std::size_t horizon;  // number of steps examined
  std::optional<PseudoOrbitWitness> witness;
  std::string verdict;

  bool passed() const noexcept { return !witness.has_value(); }
};

/// Tolerance schedule for the asymptotic-average proxy: prefix length n -> bound.
using ToleranceSchedule = std::function<double(std::size_t)>;

/// Step errors e_j = rho(T(x_j), x_{j+1}), j = 0..len-2, read from
/// coordinates 0.. of the trajectory.
std::vector<double> step_errors(const FiniteMetricSystem& sys, const FiniteTrajectory& seq);

/// DeltaChain: every e_j < delta. DeltaAverage: every window of length
/// n in [min_window, steps] has mean < delta. AsymptoticAverage: prefix
/// means for n = ceil(steps/2)..steps stay below schedule(n) (delta is only
/// recorded). Throws BadHorizon for an unusable horizon.
PseudoOrbitReport validate_pseudo_orbit(const FiniteMetricSystem& sys, const FiniteTrajectory& seq,
                                        PseudoOrbitKind kind, double delta,
                                        std::size_t min_window = 1,
                                        const ToleranceSchedule& schedule = {});

enum class BesicovitchVariant { RhoB, PiB, HatRho, HatPi };

const char* to_string(BesicovitchVariant variant) noexcept;

/// Finite-horizon value of a limsup-type pseudometric. No extrapolation is
/// made; `error_bar` is the truncation slack of pi terms (0 for rho variants).
struct BesicovitchEstimate {
  double value;
  std::size_t horizon;
  BesicovitchVariant variant;
  double error_bar = 0.0;
};

/// (1/N) sum_{j<N} rho(x_j, y_j).
BesicovitchEstimate besicovitch_rho(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                                    const FiniteTrajectory& y, std::size_t horizon);

/// (1/N) sum_{j<N} pi(S^j x, S^j y) with each pi term at the given radius;
/// inexact terms contribute their bound 1/(K+2).
BesicovitchEstimate besicovitch_pi(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                                   const FiniteTrajectory& y, std::size_t horizon,
                                   std::int64_t radius);

/// inf{delta > 0 : #{k < N : values[k] >= delta} / N < delta}, computed
/// exactly by scanning the sorted values. Result lies in [0, 1] for values
/// in [0, 1].
double density_infimum(std::vector<double> values);

BesicovitchEstimate hat_rho(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                            const FiniteTrajectory& y, std::size_t horizon);

BesicovitchEstimate hat_pi(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                           const FiniteTrajectory& y, std::size_t horizon, std::int64_t radius);

/// Exceedance counts for comparing the coordinatewise and shifted product
/// pseudometrics at scale delta, with delta' = delta / (2 N_delta + 1) and
/// N_delta the largest integer <= 1/delta - 1.
struct EquivalenceCheck {
  std::int64_t window;       // N_delta
  double delta_prime;
  std::size_t pi_count;      // #{k < N : pi(S^k x, S^k y) >= delta}
  std::size_t rho_count;     // #{k < N : rho(x_k, y_k) >= delta}
  std::size_t rho_prime_count;  // #{n in [-N_delta, N-1+N_delta] : rho(x_n, y_n) >= delta'}
  bool holds;  // pi_count <= (2 N_delta + 1) rho_prime_count and pi_count >= rho_count
};

/// Requires coverage of [-N_delta, N - 1 + N_delta].
EquivalenceCheck equivalence_bound_check(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                                         const FiniteTrajectory& y, std::size_t horizon,
                                         double delta);

struct AverageTracer {
  PointId start;
  double average;
};

/// argmin over z of (1/N) sum_{j<N} rho(T^j z, p_j); lowest id on ties.
AverageTracer best_average_tracer(const FiniteMetricSystem& sys, const FiniteTrajectory& p,
                                  std::size_t horizon);

}  // namespace deltachain
