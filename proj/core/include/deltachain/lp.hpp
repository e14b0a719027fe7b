#pragma once

#include <cstddef>
#include <vector>

#include "deltachain/matrix.hpp"

namespace deltachain {

/// min c.x subject to A x = b, x >= 0.
struct StandardFormLp {
  RealMatrix a;
  std::vector<double> b;
  std::vector<double> c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 200000;
};

/// Two-phase revised primal simplex. Dantzig pricing, falling back to Bland's
/// rule during long degenerate stretches. Throws SolverIterationCap.
LpSolution solve_lp(const StandardFormLp& lp, const SimplexOptions& options = {});

}  // namespace deltachain
