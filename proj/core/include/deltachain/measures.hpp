#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "deltachain/chain_graph.hpp"
#include "deltachain/matrix.hpp"
#include "deltachain/metric_system.hpp"

namespace deltachain {

inline constexpr double kMassTolerance = 1e-9;

/// Probability vector on the points of a finite system.
struct FiniteMeasure {
  std::vector<double> weights;

  /// Throws InvalidArgument unless nonnegative and summing to 1 within 1e-9.
  void validate() const;
  static FiniteMeasure dirac(std::size_t n, PointId u);
};

using Word = std::vector<PointId>;

/// Primitive root of a word: the shortest u with word = u^r.
Word primitive_root(const Word& word);
/// Lexicographically least rotation.
Word least_rotation(const Word& word);

/// Uniform measure on the shift orbit of the periodic sequence word^Z.
/// Stored canonically: primitive root, least rotation.
class PeriodicOrbitMeasure {
 public:
  explicit PeriodicOrbitMeasure(const Word& word);

  const Word& word() const noexcept { return word_; }
  std::size_t period() const noexcept { return word_.size(); }
  PointId at(std::size_t i) const { return word_[i % word_.size()]; }

  friend bool operator==(const PeriodicOrbitMeasure&, const PeriodicOrbitMeasure&) = default;
  friend auto operator<=>(const PeriodicOrbitMeasure& a, const PeriodicOrbitMeasure& b) {
    if (a.word_.size() != b.word_.size()) return a.word_.size() <=> b.word_.size();
    return a.word_ <=> b.word_;
  }

 private:
  Word word_;
};

/// Distribution of length-w blocks, sorted by block.
struct BlockDistribution {
  std::size_t length = 0;
  std::map<Word, double> mass;
};

/// Index w - 1 holds the length-w block distribution.
using CylinderDistributions = std::vector<BlockDistribution>;

CylinderDistributions empirical_measure(const PeriodicOrbitMeasure& pm, std::size_t depth);

/// Weighted combination of cylinder distributions of equal depth.
CylinderDistributions mix_cylinders(const std::vector<CylinderDistributions>& parts,
                                    const std::vector<double>& weights);

/// Length-1 marginal as a measure on n points.
FiniteMeasure marginal(const CylinderDistributions& cyl, std::size_t n);

/// Stationary Markov chain on hidden states, each state labelled by a point.
/// The labelled process is a shift-invariant measure on X^Z; the identity
/// labelling gives an ordinary one-step Markov measure.
class MarkovMeasure {
 public:
  /// Computes the stationary vector; requires P irreducible.
  MarkovMeasure(RealMatrix transition, std::vector<PointId> labels);
  /// Uses the given stationary vector (needed for reducible chains such as
  /// mixtures); validates s P = s.
  MarkovMeasure(RealMatrix transition, std::vector<PointId> labels, std::vector<double> stationary);

  /// Deterministic cycle on the positions of the word.
  static MarkovMeasure from_periodic(const PeriodicOrbitMeasure& pm);
  /// Block-diagonal deterministic cycles with stationary mass w_i / p_i.
  static MarkovMeasure from_mixture(const std::vector<PeriodicOrbitMeasure>& parts,
                                    const std::vector<double>& weights);

  std::size_t states() const noexcept { return labels_.size(); }
  const RealMatrix& transition() const noexcept { return p_; }
  const std::vector<PointId>& labels() const noexcept { return labels_; }
  const std::vector<double>& stationary() const noexcept { return s_; }

  /// Every positive transition maps to an edge of g.
  bool supported_on(const ChainGraph& g) const;

  CylinderDistributions cylinders(std::size_t depth) const;
  FiniteMeasure label_marginal(std::size_t n) const;

 private:
  void validate_kernel() const;

  RealMatrix p_;
  std::vector<PointId> labels_;
  std::vector<double> s_;
};

enum class CouplingStatus { Optimal, Feasible };

struct JointTransition {
  std::size_t from_a, from_b, to_a, to_b;
  double flow;  // lambda(from) * Q(from, to)
};

/// Value of a transport plan or Markov coupling realizing a distance bound.
struct CouplingResult {
  double value = 0.0;
  CouplingStatus status = CouplingStatus::Optimal;
  RealMatrix plan;  // transport plan, or the stationary pair distribution
  std::vector<JointTransition> kernel;  // empty for plain transport
  std::optional<double> lower_bound;
};

/// Exact W1 between two measures under `cost` (network simplex).
CouplingResult w1_distance(const FiniteMeasure& mu, const FiniteMeasure& nu, const RealMatrix& cost);

struct PhaseResult {
  double value;
  std::size_t phase;  // a in [0, gcd(p, q)): word_p is read from offset a
  double error_bar = 0.0;
};

/// rho-bar between periodic-orbit measures: minimum over phases of the
/// average cost along the product orbit of length lcm(p, q).
PhaseResult rho_bar_periodic(const PeriodicOrbitMeasure& pm, const PeriodicOrbitMeasure& qm,
                             const RealMatrix& cost);

/// Average along the product orbit with both words read from offset 0.
double aligned_average(const PeriodicOrbitMeasure& pm, const PeriodicOrbitMeasure& qm,
                       const RealMatrix& cost);

/// pi-bar between the same measures viewed on X^Z, with pi terms truncated
/// to |k| <= radius. Inexact terms count as their bound 1/(radius+2), so the
/// true value lies in [value - error_bar, value].
PhaseResult pi_bar_periodic(const PeriodicOrbitMeasure& pm, const PeriodicOrbitMeasure& qm,
                            const FiniteMetricSystem& sys, std::int64_t radius);

inline constexpr std::size_t kCouplingVariableCap = 40000;

/// Upper bound on rho-bar by the cheapest stationary Markov coupling
/// (average-cost LP); lower_bound holds W1 of the label marginals.
CouplingResult rho_bar_markov_upper(const MarkovMeasure& mu, const MarkovMeasure& nu,
                                    const RealMatrix& cost,
                                    std::size_t variable_cap = kCouplingVariableCap);

/// max of the two directed sup-inf distances; d is |A| x |B|.
double hausdorff_distance(const RealMatrix& d);

/// Same on index sets with a distance callback; the inner infimum stops
/// early once it cannot raise the running supremum.
double hausdorff_distance(std::size_t size_a, std::size_t size_b,
                          const std::function<double(std::size_t, std::size_t)>& d);

/// rho-bar between finite mixtures of ergodic measures whose pairwise
/// component distances are `d`: transport of the mixing weights.
double mixture_distance(const std::vector<double>& weights_a, const std::vector<double>& weights_b,
                        const RealMatrix& d);

/// Distance from a mixture (weights over the rows of d) to the closed convex
/// hull of the column measures: sum_i w_i min_j d(i, j).
double distance_to_hull(const std::vector<double>& weights, const RealMatrix& d);

struct ErgodicSet {
  std::vector<PeriodicOrbitMeasure> measures;  // shortest first, then lexicographic
  bool truncated = false;
  std::size_t max_period = 0;
};

/// Simple cycles of g up to max_period, canonicalized; at most `cap` of them.
ErgodicSet ergodic_measures_of_graph(const ChainGraph& g, std::size_t max_period, std::size_t cap);

struct Rational {
  std::int64_t num;
  std::int64_t den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct WeightedOrbit {
  PeriodicOrbitMeasure measure;
  Rational weight;
};

/// Concatenates round(w_i L / p_i) copies of each component cycle, joined
/// cyclically by connecting chains of M steps, into one periodic chain.
PeriodicOrbitMeasure sigmund_approximation(const std::vector<WeightedOrbit>& target,
                                           const ChainGraph& g, std::size_t block_scale);

/// sum_{w=1..depth} 2^{-w} W1(length-w blocks), block cost = max coordinate
/// distance. Throws DepthMismatch if either side is shallower than depth.
double weakstar_proxy(const CylinderDistributions& a, const CylinderDistributions& b,
                      std::size_t depth, const FiniteMetricSystem& sys);

}  // namespace deltachain
