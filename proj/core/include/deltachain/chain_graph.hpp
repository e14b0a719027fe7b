#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deltachain/bit_matrix.hpp"
#include "deltachain/metric_system.hpp"
#include "deltachain/trajectory.hpp"

namespace deltachain {

using SystemPtr = std::shared_ptr<const FiniteMetricSystem>;

/// Graph with an edge u -> v iff dist(T(u), v) <= delta. Its bi-infinite
/// walks are exactly the bi-infinite delta-chains of the system.
class ChainGraph {
 public:
  ChainGraph(SystemPtr system, double delta);

  const FiniteMetricSystem& system() const noexcept { return *system_; }
  const SystemPtr& system_ptr() const noexcept { return system_; }
  double delta() const noexcept { return delta_; }
  std::size_t size() const noexcept { return successors_.size(); }

  bool has_edge(PointId u, PointId v) const { return adjacency_.get(u, v); }
  /// Out-neighbours in ascending id order.
  const std::vector<PointId>& successors(PointId u) const { return successors_[u]; }
  const std::vector<PointId>& predecessors(PointId v) const { return predecessors_[v]; }
  const BitMatrix& adjacency() const noexcept { return adjacency_; }
  std::size_t edge_count() const noexcept { return adjacency_.count(); }

 private:
  SystemPtr system_;
  double delta_;
  BitMatrix adjacency_;
  std::vector<std::vector<PointId>> successors_;
  std::vector<std::vector<PointId>> predecessors_;
};

/// Requires 0 <= delta <= 1.
ChainGraph build_chain_graph(SystemPtr sys, double delta);

/// Strongly connected components in Tarjan order; each sorted ascending.
std::vector<std::vector<PointId>> strongly_connected_components(const ChainGraph& g);

struct MixingCertificate {
  bool strongly_connected = false;
  std::size_t scc_count = 0;
  /// gcd of cycle lengths (over all non-trivial components when the graph is
  /// not strongly connected).
  std::size_t period = 0;
  /// Least M with every boolean power A^m (m >= M) all-true; present iff primitive.
  std::optional<std::size_t> mixing_constant;
  /// Pair (u, v) with no walk of length M - 1; present when M exists and n > 1.
  std::optional<std::pair<PointId, PointId>> minimality_witness;

  bool primitive() const noexcept { return mixing_constant.has_value(); }
};

/// (n - 1)^2 + 1.
std::size_t wielandt_bound(std::size_t n);

MixingCertificate mixing_certificate(const ChainGraph& g);

/// Walk z_0 = x, ..., z_n = y, choosing the lowest admissible id at each
/// step. Throws NoChain when no walk of exactly n steps exists.
std::vector<PointId> finite_chain(const ChainGraph& g, PointId x, PointId y, std::size_t n);

/// Graphs for delta = 1, 1/2, ..., 1/n_max (decreasing delta).
std::vector<ChainGraph> chain_family(SystemPtr sys, std::size_t n_max);

/// Distinct values of dist(T(u), v), ascending: the only thresholds at which
/// the chain graph changes.
std::vector<double> critical_deltas(const FiniteMetricSystem& sys);

/// Every consecutive pair of the trajectory is an edge of g.
bool is_delta_chain(const FiniteTrajectory& traj, const ChainGraph& g);
/// Same check on a cyclic word, including the closing pair (last, first).
bool is_cyclic_delta_chain(const std::vector<PointId>& word, const ChainGraph& g);

std::string to_adjacency_text(const ChainGraph& g);
std::string to_dot(const ChainGraph& g);

}  // namespace deltachain
