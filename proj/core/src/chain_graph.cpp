#include "deltachain/chain_graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "deltachain/error.hpp"

namespace deltachain {

ChainGraph::ChainGraph(SystemPtr system, double delta)
    : system_(std::move(system)), delta_(delta) {
  if (!system_) throw Error(ErrorKind::InvalidArgument, "chain graph needs a system");
  if (!(delta >= 0.0) || delta > 1.0) {
    throw Error(ErrorKind::InvalidArgument, "delta must lie in [0, 1]");
  }
  const std::size_t n = system_->size();
  adjacency_ = BitMatrix(n);
  successors_.assign(n, {});
  predecessors_.assign(n, {});
  for (std::size_t u = 0; u < n; ++u) {
    const PointId image = system_->map(static_cast<PointId>(u));
    for (std::size_t v = 0; v < n; ++v) {
      if (leq_tol(system_->dist(image, static_cast<PointId>(v)), delta_)) {
        adjacency_.set(u, v);
        successors_[u].push_back(static_cast<PointId>(v));
        predecessors_[v].push_back(static_cast<PointId>(u));
      }
    }
  }
}

ChainGraph build_chain_graph(SystemPtr sys, double delta) {
  return ChainGraph(std::move(sys), delta);
}

std::vector<std::vector<PointId>> strongly_connected_components(const ChainGraph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<PointId> stack;
  std::vector<std::vector<PointId>> components;
  std::size_t counter = 0;

  struct Frame {
    PointId vertex;
    std::size_t next_child;
  };
  std::vector<Frame> call_stack;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call_stack.push_back({static_cast<PointId>(root), 0});
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<PointId>(root));
    on_stack[root] = 1;

    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      const PointId v = frame.vertex;
      const auto& succ = g.successors(v);
      if (frame.next_child < succ.size()) {
        const PointId w = succ[frame.next_child++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call_stack.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<PointId> component;
        PointId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const PointId parent = call_stack.back().vertex;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return components;
}

namespace {

// gcd of cycle lengths inside one component: BFS levels, then gcd of
// level[u] + 1 - level[v] over internal edges. Zero for a component
// without internal edges.
std::size_t component_period(const ChainGraph& g, const std::vector<PointId>& component,
                             const std::vector<std::size_t>& component_of, std::size_t id) {
  const std::size_t n = g.size();
  constexpr std::int64_t kUnseen = -1;
  std::vector<std::int64_t> level(n, kUnseen);
  std::queue<PointId> queue;
  level[component.front()] = 0;
  queue.push(component.front());
  while (!queue.empty()) {
    const PointId u = queue.front();
    queue.pop();
    for (PointId v : g.successors(u)) {
      if (component_of[v] != id || level[v] != kUnseen) continue;
      level[v] = level[u] + 1;
      queue.push(v);
    }
  }
  std::int64_t period = 0;
  for (PointId u : component) {
    for (PointId v : g.successors(u)) {
      if (component_of[v] != id) continue;
      period = std::gcd(period, level[u] + 1 - level[v]);
    }
  }
  return static_cast<std::size_t>(period < 0 ? -period : period);
}

bool all_pairs_reachable(const BitMatrix& m) { return m.all(); }

}  // namespace

std::size_t wielandt_bound(std::size_t n) { return n == 0 ? 1 : (n - 1) * (n - 1) + 1; }

MixingCertificate mixing_certificate(const ChainGraph& g) {
  MixingCertificate cert;
  const auto components = strongly_connected_components(g);
  const std::size_t n = g.size();
  cert.scc_count = components.size();
  cert.strongly_connected = components.size() == 1;

  std::vector<std::size_t> component_of(n, 0);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (PointId u : components[c]) component_of[u] = c;
  }
  std::size_t period = 0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    period = std::gcd(period, component_period(g, components[c], component_of, c));
  }
  cert.period = period;

  if (!cert.strongly_connected || cert.period != 1) return cert;

  const BitMatrix& a = g.adjacency();
  BitMatrix previous = BitMatrix::identity(n);
  BitMatrix power = a;
  const std::size_t bound = wielandt_bound(n);
  for (std::size_t m = 1; m <= bound; ++m) {
    if (all_pairs_reachable(power)) {
      cert.mixing_constant = m;
      for (std::size_t u = 0; u < n && !cert.minimality_witness; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          if (!previous.get(u, v)) {
            cert.minimality_witness = {static_cast<PointId>(u), static_cast<PointId>(v)};
            break;
          }
        }
      }
      return cert;
    }
    previous = power;
    power = power.multiply(a);
  }
  // Unreachable for a primitive graph; leaving M absent signals the contradiction.
  return cert;
}

std::vector<PointId> finite_chain(const ChainGraph& g, PointId x, PointId y, std::size_t n) {
  const std::size_t size = g.size();
  if (!g.system().valid_id(x) || !g.system().valid_id(y)) {
    throw Error(ErrorKind::InvalidArgument, "chain endpoints must be valid ids");
  }
  // reach[r][v]: v reaches y in exactly r steps.
  std::vector<std::vector<char>> reach(n + 1, std::vector<char>(size, 0));
  reach[0][y] = 1;
  for (std::size_t r = 1; r <= n; ++r) {
    for (std::size_t v = 0; v < size; ++v) {
      if (!reach[r - 1][v]) continue;
      for (PointId u : g.predecessors(static_cast<PointId>(v))) reach[r][u] = 1;
    }
  }
  if (!reach[n][x]) {
    std::ostringstream os;
    os << "no walk of length " << n << " from " << x << " to " << y;
    throw Error(ErrorKind::NoChain, os.str());
  }
  std::vector<PointId> walk;
  walk.reserve(n + 1);
  walk.push_back(x);
  PointId current = x;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t remaining = n - step - 1;
    for (PointId v : g.successors(current)) {
      if (reach[remaining][v]) {
        current = v;
        break;
      }
    }
    walk.push_back(current);
  }
  return walk;
}

std::vector<ChainGraph> chain_family(SystemPtr sys, std::size_t n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 1");
  std::vector<ChainGraph> family;
  family.reserve(n_max);
  for (std::size_t k = 1; k <= n_max; ++k) {
    family.emplace_back(sys, 1.0 / static_cast<double>(k));
  }
  return family;
}

std::vector<double> critical_deltas(const FiniteMetricSystem& sys) {
  std::vector<double> values;
  for (std::size_t u = 0; u < sys.size(); ++u) {
    for (std::size_t v = 0; v < sys.size(); ++v) {
      values.push_back(sys.dist(sys.map(static_cast<PointId>(u)), static_cast<PointId>(v)));
    }
  }
  std::sort(values.begin(), values.end());
  std::vector<double> distinct;
  for (double d : values) {
    if (distinct.empty() || d > distinct.back() + kDistanceTolerance) distinct.push_back(d);
  }
  return distinct;
}

bool is_delta_chain(const FiniteTrajectory& traj, const ChainGraph& g) {
  const auto& e = traj.entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!g.system().valid_id(e[i])) return false;
    if (i + 1 < e.size() && (!g.system().valid_id(e[i + 1]) || !g.has_edge(e[i], e[i + 1]))) {
      return false;
    }
  }
  return true;
}

bool is_cyclic_delta_chain(const std::vector<PointId>& word, const ChainGraph& g) {
  if (word.empty()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const PointId u = word[i];
    const PointId v = word[(i + 1) % word.size()];
    if (!g.system().valid_id(u) || !g.system().valid_id(v) || !g.has_edge(u, v)) return false;
  }
  return true;
}

std::string to_adjacency_text(const ChainGraph& g) {
  std::ostringstream os;
  os << "# delta " << g.delta() << "\n";
  for (std::size_t u = 0; u < g.size(); ++u) {
    os << u << ":";
    for (PointId v : g.successors(static_cast<PointId>(u))) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

std::string to_dot(const ChainGraph& g) {
  std::ostringstream os;
  os << "digraph chain_graph {\n";
  os << "  label=\"delta = " << g.delta() << "\";\n";
  const auto& sys = g.system();
  for (std::size_t u = 0; u < g.size(); ++u) {
    os << "  n" << u << " [label=\"" << sys.label(static_cast<PointId>(u)) << "\"];\n";
  }
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (PointId v : g.successors(static_cast<PointId>(u))) {
      os << "  n" << u << " -> n" << v << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace deltachain
