#include "deltachain/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "deltachain/error.hpp"

namespace deltachain {
namespace {

constexpr double kReducedCostTolerance = 1e-12;

struct BasicCell {
  std::size_t row;
  std::size_t col;
  double flow;
};

// Tree over m + n nodes: rows are 0..m-1, columns m..m+n-1.
class BasisTree {
 public:
  BasisTree(std::size_t m, std::size_t n) : m_(m), n_(n), adj_(m + n) {}

  void add(std::size_t cell_index, const BasicCell& cell) {
    adj_[cell.row].push_back(cell_index);
    adj_[m_ + cell.col].push_back(cell_index);
  }
  void remove(std::size_t cell_index, const BasicCell& cell) {
    auto drop = [cell_index](std::vector<std::size_t>& v) {
      v.erase(std::find(v.begin(), v.end(), cell_index));
    };
    drop(adj_[cell.row]);
    drop(adj_[m_ + cell.col]);
  }

  std::size_t other_end(const BasicCell& cell, std::size_t node) const {
    return node == cell.row ? m_ + cell.col : cell.row;
  }

  // Potentials with u_0 = 0 and cost = u_row + v_col on basic cells.
  void potentials(const std::vector<BasicCell>& cells, const RealMatrix& cost,
                  std::vector<double>& pot) const {
    pot.assign(m_ + n_, 0.0);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t ci : adj_[node]) {
        const auto& cell = cells[ci];
        const std::size_t next = other_end(cell, node);
        if (seen[next]) continue;
        seen[next] = 1;
        pot[next] = cost(cell.row, cell.col) - pot[node];
        stack.push_back(next);
      }
    }
  }

  // Cell indices on the tree path from `from` to `to`, in order.
  std::vector<std::size_t> path(const std::vector<BasicCell>& cells, std::size_t from,
                                std::size_t to) const {
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> via(m_ + n_, kNone);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      if (node == to) break;
      for (std::size_t ci : adj_[node]) {
        const std::size_t next = other_end(cells[ci], node);
        if (seen[next]) continue;
        seen[next] = 1;
        via[next] = ci;
        stack.push_back(next);
      }
    }
    std::vector<std::size_t> edges;
    for (std::size_t node = to; node != from;) {
      const std::size_t ci = via[node];
      edges.push_back(ci);
      node = other_end(cells[ci], node);
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
  }

 private:
  std::size_t m_, n_;
  std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace

TransportPlan solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                              const RealMatrix& cost, std::size_t max_pivots) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  if (m == 0 || n == 0) throw Error(ErrorKind::InvalidArgument, "empty transport problem");
  if (cost.rows() != m || cost.cols() != n) {
    throw Error(ErrorKind::InvalidArgument, "cost matrix shape does not match marginals");
  }
  for (double s : supply) {
    if (!(s >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative supply");
  }
  for (double d : demand) {
    if (!(d >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative demand");
  }
  const double total_s = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double total_d = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (std::abs(total_s - total_d) > 1e-9) {
    throw Error(ErrorKind::Infeasible, "supply and demand totals differ");
  }
  if (max_pivots == 0) max_pivots = 50 * (m + n) * (m + n) + 1000;

  // Northwest corner: a staircase of exactly m + n - 1 cells, always a tree.
  std::vector<BasicCell> cells;
  {
    std::vector<double> s = supply, d = demand;
    std::size_t i = 0, j = 0;
    while (i < m && j < n) {
      const double x = std::min(s[i], d[j]);
      cells.push_back({i, j, x});
      s[i] -= x;
      d[j] -= x;
      if (i == m - 1) {
        ++j;
      } else if (j == n - 1) {
        ++i;
      } else if (s[i] <= d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  BasisTree tree(m, n);
  Matrix<char> is_basic(m, n, 0);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    tree.add(k, cells[k]);
    is_basic(cells[k].row, cells[k].col) = 1;
  }

  std::vector<double> pot;
  std::size_t pivots = 0;
  for (;;) {
    tree.potentials(cells, cost, pot);
    std::size_t enter_r = m, enter_c = n;
    double best = -kReducedCostTolerance;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (is_basic(r, c)) continue;
        const double reduced = cost(r, c) - pot[r] - pot[m + c];
        if (reduced < best) {
          best = reduced;
          enter_r = r;
          enter_c = c;
        }
      }
    }
    if (enter_r == m) break;
    if (++pivots > max_pivots) {
      throw Error(ErrorKind::SolverIterationCap, "network simplex pivot cap reached");
    }

    // Cycle: entering cell (+), then the tree path from its column back to
    // its row with alternating signs starting at (-).
    const std::vector<std::size_t> path = tree.path(cells, m + enter_c, enter_r);
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = path.front();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      if (cells[path[k]].flow < theta) {
        theta = cells[path[k]].flow;
        leaving = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      cells[path[k]].flow += (k % 2 == 0) ? -theta : theta;
    }

    const BasicCell old = cells[leaving];
    tree.remove(leaving, old);
    is_basic(old.row, old.col) = 0;
    cells[leaving] = {enter_r, enter_c, theta};
    tree.add(leaving, cells[leaving]);
    is_basic(enter_r, enter_c) = 1;
  }

  TransportPlan plan;
  plan.flow = RealMatrix(m, n, 0.0);
  plan.pivots = pivots;
  for (const auto& cell : cells) {
    const double f = std::max(0.0, cell.flow);
    plan.flow(cell.row, cell.col) += f;
    plan.cost += f * cost(cell.row, cell.col);
  }
  return plan;
}

}  // namespace deltachain
