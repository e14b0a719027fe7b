#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "deltachain/chain_graph.hpp"
#include "deltachain/trajectory.hpp"

namespace deltachain {

/// Orbit segments x^(i) over [a_i, b_i) inside the chain subshift, each
/// source carrying at least N - 1 coordinates of context on both sides.
struct SpacedSpecification {
  std::vector<IntervalSegment> segments;
};

/// One period of a periodic point of the chain subshift:
/// y_k = word[(k + origin_offset) mod period].
struct PeriodicChain {
  std::vector<PointId> word;
  std::size_t period = 0;
  std::int64_t origin_offset = 0;

  PointId at(Coord k) const;
  /// Coordinates [lo, hi] of the periodic sequence.
  FiniteTrajectory window(Coord lo, Coord hi) const;
};

struct SpacingConstant {
  std::int64_t window;   // N = least positive integer with 1/N <= eps
  std::int64_t spacing;  // k(eps) = 2N - 2 + M
};

/// Throws NotMixing when the certificate has no mixing constant.
SpacingConstant spacing_constant(double eps, const MixingCertificate& cert);

/// Glues the margin-extended segments with connecting chains into one
/// periodic chain of period b_n + k(eps); coordinate 0 carries x^(1)_{a_1}.
/// Coordinates in [a_i - N + 1, b_i + N - 2] are copied verbatim from x^(i).
PeriodicChain trace_specification(const SpacedSpecification& spec, const ChainGraph& g,
                                  double eps);

struct TraceReport {
  bool ok = true;
  std::string failure;
  std::optional<std::size_t> segment;
  std::optional<Coord> shift;
};

/// Independent re-check of a traced specification: cyclic chain validity,
/// consistent period, and the window criterion for pi(S^j y, S^j x^(i)) < eps
/// at every j in [a_i, b_i).
TraceReport verify_trace(const PeriodicChain& y, const SpacedSpecification& spec,
                         const ChainGraph& g, double eps);

/// Smallest p dividing word.size() with word invariant under rotation by p.
std::size_t minimal_period(const std::vector<PointId>& word);

}  // namespace deltachain
