#include "deltachain/measures.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

#include "deltachain/error.hpp"
#include "deltachain/lp.hpp"
#include "deltachain/transport.hpp"

namespace deltachain {

void FiniteMeasure::validate() const {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= -kMassTolerance)) throw Error(ErrorKind::InvalidArgument, "negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorKind::InvalidArgument, "weights do not sum to 1");
  }
}

FiniteMeasure FiniteMeasure::dirac(std::size_t n, PointId u) {
  FiniteMeasure m{std::vector<double>(n, 0.0)};
  m.weights.at(static_cast<std::size_t>(u)) = 1.0;
  return m;
}

Word primitive_root(const Word& word) {
  const std::size_t n = word.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = word[i] == word[i - p];
    if (ok) return Word(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(p));
  }
  return word;
}

Word least_rotation(const Word& word) {
  const std::size_t n = word.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const PointId a = word[(r + i) % n];
      const PointId b = word[(best + i) % n];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  Word out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = word[(best + i) % n];
  return out;
}

PeriodicOrbitMeasure::PeriodicOrbitMeasure(const Word& word) {
  if (word.empty()) throw Error(ErrorKind::InvalidArgument, "periodic word must be non-empty");
  word_ = least_rotation(primitive_root(word));
}

CylinderDistributions empirical_measure(const PeriodicOrbitMeasure& pm, std::size_t depth) {
  if (depth == 0) throw Error(ErrorKind::InvalidArgument, "cylinder depth must be positive");
  const std::size_t p = pm.period();
  const double unit = 1.0 / static_cast<double>(p);
  CylinderDistributions out(depth);
  for (std::size_t w = 1; w <= depth; ++w) {
    out[w - 1].length = w;
    for (std::size_t start = 0; start < p; ++start) {
      Word block(w);
      for (std::size_t i = 0; i < w; ++i) block[i] = pm.at(start + i);
      out[w - 1].mass[block] += unit;
    }
  }
  return out;
}

CylinderDistributions mix_cylinders(const std::vector<CylinderDistributions>& parts,
                                    const std::vector<double>& weights) {
  if (parts.empty() || parts.size() != weights.size()) {
    throw Error(ErrorKind::InvalidArgument, "mixture needs one weight per part");
  }
  const std::size_t depth = parts.front().size();
  CylinderDistributions out(depth);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].size() != depth) throw Error(ErrorKind::DepthMismatch, "mixture depths differ");
    for (std::size_t w = 0; w < depth; ++w) {
      out[w].length = w + 1;
      for (const auto& [block, mass] : parts[k][w].mass) out[w].mass[block] += weights[k] * mass;
    }
  }
  return out;
}

FiniteMeasure marginal(const CylinderDistributions& cyl, std::size_t n) {
  if (cyl.empty()) throw Error(ErrorKind::DepthMismatch, "no length-1 distribution");
  FiniteMeasure m{std::vector<double>(n, 0.0)};
  for (const auto& [block, mass] : cyl.front().mass) m.weights.at(block.front()) += mass;
  return m;
}

// ---------------------------------------------------------------------------
// Markov measures

namespace {

// Solves s (P - I) = 0, sum s = 1 by Gaussian elimination with partial pivoting.
std::vector<double> stationary_vector(const RealMatrix& p) {
  const std::size_t n = p.rows();
  RealMatrix a(n, n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  a(n - 1, n) = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    }
    if (std::abs(a(piv, col)) < 1e-12) {
      throw Error(ErrorKind::InvalidArgument, "transition matrix is not irreducible");
    }
    for (std::size_t c = 0; c <= n; ++c) std::swap(a(col, c), a(piv, c));
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::max(0.0, a(i, n) / a(i, i));
  const double total = std::accumulate(s.begin(), s.end(), 0.0);
  for (double& x : s) x /= total;
  return s;
}

}  // namespace

void MarkovMeasure::validate_kernel() const {
  const std::size_t n = labels_.size();
  if (n == 0 || p_.rows() != n || p_.cols() != n) {
    throw Error(ErrorKind::InvalidArgument, "transition matrix must be square with one label per state");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(p_(i, j) >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative transition");
      row += p_(i, j);
    }
    if (std::abs(row - 1.0) > kMassTolerance) {
      throw Error(ErrorKind::InvalidArgument, "row " + std::to_string(i) + " is not stochastic");
    }
  }
}

MarkovMeasure::MarkovMeasure(RealMatrix transition, std::vector<PointId> labels)
    : p_(std::move(transition)), labels_(std::move(labels)) {
  validate_kernel();
  s_ = stationary_vector(p_);
}

MarkovMeasure::MarkovMeasure(RealMatrix transition, std::vector<PointId> labels,
                             std::vector<double> stationary)
    : p_(std::move(transition)), labels_(std::move(labels)), s_(std::move(stationary)) {
  validate_kernel();
  FiniteMeasure{s_}.validate();
  for (std::size_t j = 0; j < s_.size(); ++j) {
    double flow = 0.0;
    for (std::size_t i = 0; i < s_.size(); ++i) flow += s_[i] * p_(i, j);
    if (std::abs(flow - s_[j]) > kMassTolerance) {
      throw Error(ErrorKind::InvalidArgument, "stationary vector is not invariant");
    }
  }
}

MarkovMeasure MarkovMeasure::from_periodic(const PeriodicOrbitMeasure& pm) {
  const std::size_t p = pm.period();
  RealMatrix t(p, p, 0.0);
  for (std::size_t i = 0; i < p; ++i) t(i, (i + 1) % p) = 1.0;
  return MarkovMeasure(std::move(t), pm.word(),
                       std::vector<double>(p, 1.0 / static_cast<double>(p)));
}

MarkovMeasure MarkovMeasure::from_mixture(const std::vector<PeriodicOrbitMeasure>& parts,
                                          const std::vector<double>& weights) {
  if (parts.empty() || parts.size() != weights.size()) {
    throw Error(ErrorKind::InvalidArgument, "mixture needs one weight per part");
  }
  std::size_t total = 0;
  for (const auto& pm : parts) total += pm.period();
  RealMatrix t(total, total, 0.0);
  std::vector<PointId> labels;
  std::vector<double> s;
  std::size_t base = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const std::size_t p = parts[k].period();
    for (std::size_t i = 0; i < p; ++i) {
      t(base + i, base + (i + 1) % p) = 1.0;
      labels.push_back(parts[k].at(i));
      s.push_back(weights[k] / static_cast<double>(p));
    }
    base += p;
  }
  return MarkovMeasure(std::move(t), std::move(labels), std::move(s));
}

bool MarkovMeasure::supported_on(const ChainGraph& g) const {
  for (std::size_t i = 0; i < states(); ++i) {
    for (std::size_t j = 0; j < states(); ++j) {
      if (p_(i, j) > 0.0 && s_[i] > 0.0 && !g.has_edge(labels_[i], labels_[j])) return false;
    }
  }
  return true;
}

CylinderDistributions MarkovMeasure::cylinders(std::size_t depth) const {
  if (depth == 0) throw Error(ErrorKind::InvalidArgument, "cylinder depth must be positive");
  CylinderDistributions out(depth);
  struct Path {
    std::size_t state;
    Word labels;
    double mass;
  };
  std::vector<Path> frontier;
  for (std::size_t i = 0; i < states(); ++i) {
    if (s_[i] > 0.0) frontier.push_back({i, Word{labels_[i]}, s_[i]});
  }
  for (std::size_t w = 1; w <= depth; ++w) {
    out[w - 1].length = w;
    for (const auto& path : frontier) out[w - 1].mass[path.labels] += path.mass;
    if (w == depth) break;
    std::vector<Path> next;
    for (const auto& path : frontier) {
      for (std::size_t j = 0; j < states(); ++j) {
        if (p_(path.state, j) <= 0.0) continue;
        Word labels = path.labels;
        labels.push_back(labels_[j]);
        next.push_back({j, std::move(labels), path.mass * p_(path.state, j)});
      }
    }
    frontier.swap(next);
  }
  return out;
}

FiniteMeasure MarkovMeasure::label_marginal(std::size_t n) const {
  FiniteMeasure m{std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < states(); ++i) m.weights.at(labels_[i]) += s_[i];
  return m;
}

// ---------------------------------------------------------------------------
// Distances

CouplingResult w1_distance(const FiniteMeasure& mu, const FiniteMeasure& nu, const RealMatrix& cost) {
  mu.validate();
  nu.validate();
  TransportPlan plan = solve_transport(mu.weights, nu.weights, cost);
  CouplingResult out;
  out.value = plan.cost;
  out.plan = std::move(plan.flow);
  return out;
}

namespace {

std::size_t lcm_size(std::size_t a, std::size_t b) { return a / std::gcd(a, b) * b; }

}  // namespace

PhaseResult rho_bar_periodic(const PeriodicOrbitMeasure& pm, const PeriodicOrbitMeasure& qm,
                             const RealMatrix& cost) {
  const std::size_t p = pm.period();
  const std::size_t q = qm.period();
  const std::size_t g = std::gcd(p, q);
  const std::size_t len = lcm_size(p, q);
  PhaseResult best{std::numeric_limits<double>::infinity(), 0, 0.0};
  for (std::size_t a = 0; a < g; ++a) {
    double sum = 0.0;
    for (std::size_t t = 0; t < len; ++t) sum += cost(pm.at(a + t), qm.at(t));
    const double value = sum / static_cast<double>(len);
    if (value < best.value) best = {value, a, 0.0};
  }
  return best;
}

double aligned_average(const PeriodicOrbitMeasure& pm, const PeriodicOrbitMeasure& qm,
                       const RealMatrix& cost) {
  const std::size_t len = lcm_size(pm.period(), qm.period());
  double sum = 0.0;
  for (std::size_t t = 0; t < len; ++t) sum += cost(pm.at(t), qm.at(t));
  return sum / static_cast<double>(len);
}

PhaseResult pi_bar_periodic(const PeriodicOrbitMeasure& pm, const PeriodicOrbitMeasure& qm,
                            const FiniteMetricSystem& sys, std::int64_t radius) {
  if (radius < 1) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  const std::size_t p = pm.period();
  const std::size_t q = qm.period();
  const std::size_t g = std::gcd(p, q);
  const std::size_t len = lcm_size(p, q);
  const double tail = 1.0 / static_cast<double>(radius + 2);
  const auto sp = static_cast<std::int64_t>(p);
  const auto sq = static_cast<std::int64_t>(q);
  auto word_at = [](const PeriodicOrbitMeasure& m, std::int64_t period, std::int64_t i) {
    return m.at(static_cast<std::size_t>(((i % period) + period) % period));
  };
  PhaseResult best{std::numeric_limits<double>::infinity(), 0, tail};
  for (std::size_t a = 0; a < g; ++a) {
    double sum = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      double sup = 0.0;
      for (std::int64_t k = -radius; k <= radius; ++k) {
        const double cap = 1.0 / static_cast<double>(std::abs(k) + 1);
        if (cap <= sup) continue;
        const auto i = static_cast<std::int64_t>(a + t) + k;
        const auto j = static_cast<std::int64_t>(t) + k;
        sup = std::max(sup, std::min(sys.dist(word_at(pm, sp, i), word_at(qm, sq, j)), cap));
      }
      sum += std::max(sup, tail);
    }
    const double value = sum / static_cast<double>(len);
    if (value < best.value) best = {value, a, tail};
  }
  return best;
}

CouplingResult rho_bar_markov_upper(const MarkovMeasure& mu, const MarkovMeasure& nu,
                                    const RealMatrix& cost, std::size_t variable_cap) {
  const std::size_t na = mu.states();
  const std::size_t nb = nu.states();
  const RealMatrix& pa = mu.transition();
  const RealMatrix& pb = nu.transition();
  auto pair_index = [nb](std::size_t i, std::size_t j) { return i * nb + j; };

  std::vector<JointTransition> edges;
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      for (std::size_t i2 = 0; i2 < na; ++i2) {
        if (pa(i, i2) <= 0.0) continue;
        for (std::size_t j2 = 0; j2 < nb; ++j2) {
          if (pb(j, j2) > 0.0) edges.push_back({i, j, i2, j2, 0.0});
        }
      }
    }
  }
  const std::size_t pairs = na * nb;
  const std::size_t vars = pairs + edges.size();
  if (vars > variable_cap) {
    std::ostringstream os;
    os << "coupling LP needs " << vars << " variables (cap " << variable_cap << ")";
    throw Error(ErrorKind::SizeOverflow, os.str());
  }

  // Row layout: mu-row coupling (i, j, i2), nu-row coupling (i, j, j2),
  // stationarity per pair, then the two marginal families.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::vector<double> rhs;
  {
    std::map<std::array<std::size_t, 3>, std::size_t> mu_rows, nu_rows;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& ed = edges[e];
      const std::array<std::size_t, 3> ka{ed.from_a, ed.from_b, ed.to_a};
      if (!mu_rows.count(ka)) {
        mu_rows[ka] = rows.size();
        rows.push_back({{pair_index(ed.from_a, ed.from_b), -pa(ed.from_a, ed.to_a)}});
        rhs.push_back(0.0);
      }
      rows[mu_rows[ka]].push_back({pairs + e, 1.0});
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& ed = edges[e];
      const std::array<std::size_t, 3> kb{ed.from_a, ed.from_b, ed.to_b};
      if (!nu_rows.count(kb)) {
        nu_rows[kb] = rows.size();
        rows.push_back({{pair_index(ed.from_a, ed.from_b), -pb(ed.from_b, ed.to_b)}});
        rhs.push_back(0.0);
      }
      rows[nu_rows[kb]].push_back({pairs + e, 1.0});
    }
    const std::size_t stationarity = rows.size();
    for (std::size_t k = 0; k < pairs; ++k) {
      rows.push_back({{k, -1.0}});
      rhs.push_back(0.0);
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      rows[stationarity + pair_index(edges[e].to_a, edges[e].to_b)].push_back({pairs + e, 1.0});
    }
    for (std::size_t i = 0; i < na; ++i) {
      std::vector<std::pair<std::size_t, double>> row;
      for (std::size_t j = 0; j < nb; ++j) row.push_back({pair_index(i, j), 1.0});
      rows.push_back(std::move(row));
      rhs.push_back(mu.stationary()[i]);
    }
    for (std::size_t j = 0; j < nb; ++j) {
      std::vector<std::pair<std::size_t, double>> row;
      for (std::size_t i = 0; i < na; ++i) row.push_back({pair_index(i, j), 1.0});
      rows.push_back(std::move(row));
      rhs.push_back(nu.stationary()[j]);
    }
  }

  StandardFormLp lp;
  lp.a = RealMatrix(rows.size(), vars, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [col, v] : rows[r]) lp.a(r, col) += v;
  }
  lp.b = rhs;
  lp.c.assign(vars, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      lp.c[pair_index(i, j)] = cost(mu.labels()[i], nu.labels()[j]);
    }
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorKind::Infeasible, "coupling LP has no optimal solution");
  }

  CouplingResult out;
  out.value = sol.objective;
  out.status = CouplingStatus::Optimal;
  out.plan = RealMatrix(na, nb, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) out.plan(i, j) = sol.x[pair_index(i, j)];
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (sol.x[pairs + e] > 0.0) {
      JointTransition t = edges[e];
      t.flow = sol.x[pairs + e];
      out.kernel.push_back(t);
    }
  }
  std::size_t n_points = 0;
  for (PointId u : mu.labels()) n_points = std::max(n_points, static_cast<std::size_t>(u) + 1);
  for (PointId u : nu.labels()) n_points = std::max(n_points, static_cast<std::size_t>(u) + 1);
  n_points = std::max(n_points, cost.rows());
  out.lower_bound =
      w1_distance(mu.label_marginal(n_points), nu.label_marginal(n_points), cost).value;
  return out;
}

double hausdorff_distance(const RealMatrix& d) {
  return hausdorff_distance(d.rows(), d.cols(),
                            [&d](std::size_t i, std::size_t j) { return d(i, j); });
}

double hausdorff_distance(std::size_t size_a, std::size_t size_b,
                          const std::function<double(std::size_t, std::size_t)>& d) {
  if (size_a == 0 || size_b == 0) throw Error(ErrorKind::EmptySet, "Hausdorff distance of empty set");
  double sup = 0.0;
  for (std::size_t i = 0; i < size_a; ++i) {
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < size_b && inf > sup; ++j) inf = std::min(inf, d(i, j));
    sup = std::max(sup, inf);
  }
  for (std::size_t j = 0; j < size_b; ++j) {
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size_a && inf > sup; ++i) inf = std::min(inf, d(i, j));
    sup = std::max(sup, inf);
  }
  return sup;
}

double mixture_distance(const std::vector<double>& weights_a, const std::vector<double>& weights_b,
                        const RealMatrix& d) {
  return solve_transport(weights_a, weights_b, d).cost;
}

double distance_to_hull(const std::vector<double>& weights, const RealMatrix& d) {
  if (weights.size() != d.rows() || d.cols() == 0) {
    throw Error(ErrorKind::EmptySet, "hull distance needs a non-empty target set");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d.cols(); ++j) best = std::min(best, d(i, j));
    total += weights[i] * best;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Ergodic enumeration

namespace {

// Shortest distance from each vertex >= root back to root inside the
// subgraph on {root, root+1, ...}.
std::vector<std::size_t> distance_to_root(const ChainGraph& g, PointId root) {
  constexpr std::size_t kFar = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.size(), kFar);
  std::vector<PointId> queue{root};
  dist[root] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const PointId v = queue[head];
    for (PointId u : g.predecessors(v)) {
      if (u < root || dist[u] != kFar) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  return dist;
}

// Enumerates simple cycles of exactly `length` rooted at their least vertex,
// in lexicographic order, until `budget` cycles were produced.
void cycles_of_length(const ChainGraph& g, std::size_t length, std::size_t budget,
                      std::vector<PeriodicOrbitMeasure>& out) {
  std::size_t produced = 0;
  for (std::size_t r = 0; r < g.size() && produced < budget; ++r) {
    const auto root = static_cast<PointId>(r);
    const std::vector<std::size_t> back = distance_to_root(g, root);
    Word path{root};
    std::vector<char> on_path(g.size(), 0);
    on_path[root] = 1;

    std::function<void(PointId)> extend = [&](PointId v) {
      if (produced >= budget) return;
      for (PointId w : g.successors(v)) {
        if (produced >= budget) return;
        if (w == root) {
          if (path.size() == length) {
            out.emplace_back(path);
            ++produced;
          }
          continue;
        }
        if (w < root || on_path[w]) continue;
        if (back[w] == static_cast<std::size_t>(-1) || path.size() + back[w] > length) continue;
        path.push_back(w);
        on_path[w] = 1;
        extend(w);
        on_path[w] = 0;
        path.pop_back();
      }
    };
    extend(root);
  }
}

}  // namespace

ErgodicSet ergodic_measures_of_graph(const ChainGraph& g, std::size_t max_period, std::size_t cap) {
  if (max_period == 0) throw Error(ErrorKind::InvalidArgument, "period cap must be positive");
  ErgodicSet set;
  set.max_period = max_period;
  for (std::size_t len = 1; len <= max_period; ++len) {
    std::vector<PeriodicOrbitMeasure> found;
    const std::size_t room = cap - set.measures.size();
    // One extra cycle tells whether this length overflowed the cap.
    cycles_of_length(g, len, room + 1, found);
    std::sort(found.begin(), found.end());
    if (found.size() > room) {
      found.erase(found.begin() + static_cast<std::ptrdiff_t>(room), found.end());
      set.truncated = true;
    }
    set.measures.insert(set.measures.end(), found.begin(), found.end());
    if (set.truncated) break;
  }
  return set;
}

// ---------------------------------------------------------------------------
// Density construction

PeriodicOrbitMeasure sigmund_approximation(const std::vector<WeightedOrbit>& target,
                                           const ChainGraph& g, std::size_t block_scale) {
  if (target.empty()) throw Error(ErrorKind::DegenerateWeights, "empty target mixture");
  std::int64_t common = 1;
  for (const auto& part : target) {
    if (part.weight.num <= 0 || part.weight.den <= 0) {
      throw Error(ErrorKind::DegenerateWeights, "weights must be positive rationals");
    }
    common = std::lcm(common, part.weight.den);
  }
  std::int64_t total = 0;
  for (const auto& part : target) total += part.weight.num * (common / part.weight.den);
  if (total != common) throw Error(ErrorKind::DegenerateWeights, "weights must sum to 1");

  for (const auto& part : target) {
    if (!is_cyclic_delta_chain(part.measure.word(), g)) {
      throw Error(ErrorKind::InvalidArgument, "target component is not a cycle of the chain graph");
    }
  }
  if (target.size() == 1) return target.front().measure;

  const MixingCertificate cert = mixing_certificate(g);
  if (!cert.mixing_constant) throw Error(ErrorKind::NotMixing, "chain graph is not primitive");
  const std::size_t gap = *cert.mixing_constant;

  std::vector<std::size_t> reps;
  for (const auto& part : target) {
    const double share = part.weight.value() * static_cast<double>(block_scale) /
                         static_cast<double>(part.measure.period());
    const auto r = static_cast<std::size_t>(std::llround(share));
    if (r == 0) {
      std::ostringstream os;
      os << "component of period " << part.measure.period() << " gets no block at scale "
         << block_scale;
      throw Error(ErrorKind::DegenerateWeights, os.str());
    }
    reps.push_back(r);
  }

  Word word;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto& cycle = target[i].measure;
    for (std::size_t r = 0; r < reps[i]; ++r) {
      word.insert(word.end(), cycle.word().begin(), cycle.word().end());
    }
    const PointId from = cycle.word().back();
    const PointId to = target[(i + 1) % target.size()].measure.word().front();
    const Word bridge = finite_chain(g, from, to, gap);
    word.insert(word.end(), bridge.begin() + 1, bridge.end() - 1);
  }
  return PeriodicOrbitMeasure(word);
}

double weakstar_proxy(const CylinderDistributions& a, const CylinderDistributions& b,
                      std::size_t depth, const FiniteMetricSystem& sys) {
  if (a.size() < depth || b.size() < depth) {
    throw Error(ErrorKind::DepthMismatch, "cylinder distributions shallower than requested depth");
  }
  double total = 0.0;
  double scale = 1.0;
  for (std::size_t w = 1; w <= depth; ++w) {
    scale *= 0.5;
    const auto& da = a[w - 1].mass;
    const auto& db = b[w - 1].mass;
    std::vector<double> supply, demand;
    std::vector<const Word*> blocks_a, blocks_b;
    for (const auto& [block, m] : da) {
      supply.push_back(m);
      blocks_a.push_back(&block);
    }
    for (const auto& [block, m] : db) {
      demand.push_back(m);
      blocks_b.push_back(&block);
    }
    RealMatrix cost(supply.size(), demand.size(), 0.0);
    for (std::size_t i = 0; i < blocks_a.size(); ++i) {
      for (std::size_t j = 0; j < blocks_b.size(); ++j) {
        double c = 0.0;
        for (std::size_t k = 0; k < w; ++k) {
          c = std::max(c, sys.dist((*blocks_a[i])[k], (*blocks_b[j])[k]));
        }
        cost(i, j) = c;
      }
    }
    // Rescale to absorb rounding drift in the block masses.
    const double sa = std::accumulate(supply.begin(), supply.end(), 0.0);
    const double sb = std::accumulate(demand.begin(), demand.end(), 0.0);
    for (double& x : supply) x /= sa;
    for (double& x : demand) x /= sb;
    total += scale * solve_transport(supply, demand, cost).cost;
  }
  return total;
}

}  // namespace deltachain
