#pragma once

#include <cstddef>
#include <vector>

#include "deltachain/matrix.hpp"

namespace deltachain {

struct TransportPlan {
  double cost = 0.0;
  RealMatrix flow;       // supply x demand
  std::size_t pivots = 0;
};

/// Exact balanced transportation problem by the network simplex on the
/// bipartite supply/demand network: northwest-corner spanning tree, node
/// potentials, cycle pivots. Supplies and demands must be nonnegative with
/// equal totals (within 1e-9). Throws SolverIterationCap past `max_pivots`.
TransportPlan solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                              const RealMatrix& cost, std::size_t max_pivots = 0);

}  // namespace deltachain
