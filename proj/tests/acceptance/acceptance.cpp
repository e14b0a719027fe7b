// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any
// failure. Each check compares library output with an independent oracle or
// a property that must hold exhaustively.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../common/oracles.hpp"
#include "deltachain/chain_graph.hpp"
#include "deltachain/consistency.hpp"
#include "deltachain/io.hpp"
#include "deltachain/measures.hpp"
#include "deltachain/pipeline.hpp"
#include "deltachain/shadowing.hpp"
#include "deltachain/specification.hpp"

using namespace deltachain;
namespace fs = std::filesystem;

namespace {

const fs::path kData = DELTACHAIN_DATA_DIR;

struct Outcome {
  bool ok = true;
  std::string detail;
};

SystemPtr load_system(const std::string& name) {
  return std::make_shared<const FiniteMetricSystem>(
      system_from_json(read_json_file(kData / "systems" / name)).system);
}

std::vector<std::string> bundled_systems() {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(kData / "systems")) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

using BoolMatrix = std::vector<std::vector<bool>>;

BoolMatrix bool_product(const BoolMatrix& x, const BoolMatrix& y) {
  const std::size_t n = x.size();
  BoolMatrix z(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (x[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (y[k][j]) z[i][j] = true;
  return z;
}

bool all_true(const BoolMatrix& x) {
  for (const auto& row : x)
    for (bool v : row)
      if (!v) return false;
  return true;
}

// 1. delta = 1 gives the complete graph; edge sets shrink with delta.
Outcome chain_graph_axioms() {
  Outcome out;
  std::size_t systems = 0;
  for (const std::string& name : bundled_systems()) {
    const SystemPtr sys = load_system(name);
    const std::size_t n = sys->size();
    const ChainGraph top(sys, 1.0);
    if (top.edge_count() != n * n) {
      out.ok = false;
      out.detail += name + " is not complete at delta 1; ";
    }
    for (std::size_t k = 1; k < 8; ++k) {
      const ChainGraph coarse(sys, 1.0 / static_cast<double>(k));
      const ChainGraph fine(sys, 1.0 / static_cast<double>(k + 1));
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
          const auto pu = static_cast<PointId>(u), pv = static_cast<PointId>(v);
          if (fine.has_edge(pu, pv) && !coarse.has_edge(pu, pv)) {
            out.ok = false;
            out.detail += name + " edge not nested; ";
          }
        }
    }
    ++systems;
  }
  out.detail += std::to_string(systems) + " systems, delta 1..1/8";
  return out;
}

// 2. Mixing constant of doubling-grid(4) at delta 1/4.
Outcome mixing_constant() {
  Outcome out;
  const ChainGraph g(load_system("circle_doubling_4.json"), 0.25);
  const MixingCertificate cert = mixing_certificate(g);
  const std::size_t n = g.size();
  BoolMatrix a(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      a[u][v] = g.has_edge(static_cast<PointId>(u), static_cast<PointId>(v));
  // Least m with A^m all-positive; primitivity keeps every later power positive.
  BoolMatrix identity(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) identity[i][i] = true;
  BoolMatrix previous = identity, power = a;
  std::size_t oracle_m = 0;
  for (std::size_t m = 1; m <= (n - 1) * (n - 1) + 1; ++m) {
    if (all_true(power)) {
      oracle_m = m;
      break;
    }
    previous = power;
    power = bool_product(power, a);
  }
  out.ok = cert.mixing_constant && *cert.mixing_constant == 2 && oracle_m == 2;
  if (cert.minimality_witness) {
    const auto [u, v] = *cert.minimality_witness;
    out.ok = out.ok && !previous[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
    out.detail = "M = " + std::to_string(cert.mixing_constant.value_or(0)) + ", oracle " +
                 std::to_string(oracle_m) + ", witness (" + std::to_string(u) + ", " +
                 std::to_string(v) + ")";
  } else {
    out.ok = false;
    out.detail = "no minimality witness";
  }
  return out;
}

std::vector<PointId> walk(const ChainGraph& g, std::size_t len, std::mt19937_64& rng) {
  std::vector<PointId> w{static_cast<PointId>(rng() % g.size())};
  while (w.size() < len) {
    const auto& succ = g.successors(w.back());
    w.push_back(succ[rng() % succ.size()]);
  }
  return w;
}

// 3. Randomized specification tracing on doubling-grid(15), delta 1/5.
Outcome specification_tracing() {
  Outcome out;
  const ChainGraph g(load_system("circle_doubling_15.json"), 0.2);
  const MixingCertificate cert = mixing_certificate(g);
  std::mt19937_64 rng(2024);
  std::size_t cases = 0, exact_cases = 0;
  for (double eps : {0.5, 1.0 / 3.0}) {
    const SpacingConstant sc = spacing_constant(eps, cert);
    for (int t = 0; t < 300; ++t) {
      const bool exact = t % 2 == 0;
      SpacedSpecification spec;
      Coord a = 0;
      const int count = 1 + static_cast<int>(rng() % 5);
      for (int i = 0; i < count; ++i) {
        const Coord b = a + 1 + static_cast<Coord>(rng() % 8);
        const Coord lo = a - sc.window + 1, hi = b + sc.window - 2;
        spec.segments.push_back(
            {a, b, FiniteTrajectory(lo, walk(g, static_cast<std::size_t>(hi - lo + 1), rng))});
        a = b + sc.spacing + (exact ? 0 : static_cast<Coord>(rng() % 5));
      }
      const PeriodicChain y = trace_specification(spec, g, eps);
      const TraceReport report = verify_trace(y, spec, g, eps);
      ++cases;
      if (!report.ok) {
        out.ok = false;
        out.detail += report.failure + "; ";
        continue;
      }
      if (exact) {
        ++exact_cases;
        if (y.period != static_cast<std::size_t>(spec.segments.back().b + sc.spacing)) {
          out.ok = false;
          out.detail += "period mismatch; ";
        }
      }
      for (const auto& s : spec.segments) {
        for (Coord n = s.source.first(); n <= s.source.last(); ++n) {
          if (y.at(n) != s.source.at(n)) {
            out.ok = false;
            out.detail += "window coordinate differs; ";
            break;
          }
        }
      }
    }
  }
  out.detail += std::to_string(cases) + " cases, " + std::to_string(exact_cases) + " exact";
  return out;
}

// 4. Besicovitch equivalence counts with delta' = delta / (2N + 1).
Outcome besicovitch_equivalence() {
  Outcome out;
  const std::size_t horizon = 200;
  std::vector<SystemPtr> systems{load_system("circle_doubling_15.json"),
                                 load_system("random_metric_10.json")};
  std::mt19937_64 rng(4242);
  std::size_t checks = 0, failures = 0;
  for (int t = 0; t < 10000; ++t) {
    const FiniteMetricSystem& sys = *systems[static_cast<std::size_t>(t) % systems.size()];
    const auto n = sys.size();
    // Enough margin for the widest window (delta = 1/5 gives N = 5).
    const Coord lo = -8;
    const std::size_t len = horizon + 16;
    std::vector<PointId> a(len), b(len);
    const unsigned rate = 1 + static_cast<unsigned>(rng() % 40);
    for (std::size_t i = 0; i < len; ++i) {
      a[i] = static_cast<PointId>(rng() % n);
      b[i] = rng() % rate == 0 ? static_cast<PointId>(rng() % n) : a[i];
    }
    const FiniteTrajectory x(lo, a), y(lo, b);
    for (double delta : {0.5, 1.0 / 3.0, 0.2}) {
      ++checks;
      if (!equivalence_bound_check(sys, x, y, horizon, delta).holds) ++failures;
    }
  }
  out.ok = failures == 0;
  out.detail = std::to_string(checks) + " checks on 10000 pairs, " + std::to_string(failures) +
               " failures";
  return out;
}

std::vector<Word> all_words(std::size_t alphabet, std::size_t max_len) {
  std::vector<Word> words;
  for (std::size_t len = 1; len <= max_len; ++len) {
    Word w(len, 0);
    for (;;) {
      words.push_back(w);
      std::size_t i = 0;
      while (i < len && ++w[i] == static_cast<PointId>(alphabet)) w[i++] = 0;
      if (i == len) break;
    }
  }
  return words;
}

// 5. rho-bar against the orbit-coupling LP and the Markov encoding.
Outcome rho_bar_oracles() {
  Outcome out;
  const RealMatrix cost = random_metric_system(3, 17).distances();
  const std::vector<Word> words = all_words(3, 4);
  double worst = 0.0;
  for (const Word& p : words)
    for (const Word& q : words) {
      const double value =
          rho_bar_periodic(PeriodicOrbitMeasure(p), PeriodicOrbitMeasure(q), cost).value;
      worst = std::max(worst, std::abs(value - oracle::orbit_coupling_lp(p, q, cost)));
    }
  std::mt19937_64 rng(55);
  double worst_markov = 0.0;
  const RealMatrix cost5 = random_metric_system(5, 3).distances();
  for (int t = 0; t < 60; ++t) {
    auto random_word = [&rng] {
      Word w(1 + rng() % 5);
      for (auto& c : w) c = static_cast<PointId>(rng() % 5);
      return PeriodicOrbitMeasure(w);
    };
    const PeriodicOrbitMeasure p = random_word(), q = random_word();
    const double exact = rho_bar_periodic(p, q, cost5).value;
    const double lp = rho_bar_markov_upper(MarkovMeasure::from_periodic(p),
                                           MarkovMeasure::from_periodic(q), cost5)
                          .value;
    worst_markov = std::max(worst_markov, std::abs(exact - lp));
  }
  out.ok = worst <= 1e-9 && worst_markov <= 1e-9;
  std::ostringstream os;
  os << words.size() * words.size() << " word pairs, max gap " << worst
     << "; 60 Markov pairs, max gap " << worst_markov;
  out.detail = os.str();
  return out;
}

// 6. W1(marginals) <= rho-bar <= aligned average on the same suite.
Outcome sandwich() {
  Outcome out;
  const RealMatrix cost = random_metric_system(3, 17).distances();
  const std::vector<Word> words = all_words(3, 4);
  std::size_t violations = 0, pairs = 0;
  for (const Word& p : words)
    for (const Word& q : words) {
      const PeriodicOrbitMeasure pm(p), qm(q);
      const double rho = rho_bar_periodic(pm, qm, cost).value;
      const double w1 = w1_distance(marginal(empirical_measure(pm, 1), 3),
                                    marginal(empirical_measure(qm, 1), 3), cost)
                            .value;
      const double aligned = aligned_average(pm, qm, cost);
      ++pairs;
      if (w1 > rho + 1e-9 || rho > aligned + 1e-9) ++violations;
    }
  out.ok = violations == 0;
  out.detail = std::to_string(pairs) + " pairs, " + std::to_string(violations) + " violations";
  return out;
}

// 7. Hausdorff distance of ergodic sets matches that of their hulls.
Outcome hull_consistency() {
  Outcome out;
  const std::int64_t radius = 8;
  std::mt19937_64 rng(7);
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const std::string name : {"circle_doubling_15.json", "random_metric_10.json"}) {
    const SystemPtr sys = load_system(name);
    std::vector<std::vector<PeriodicOrbitMeasure>> sets;
    for (std::size_t n = 2; n <= 6; ++n) {
      const ChainGraph g(sys, 1.0 / static_cast<double>(n));
      const ErgodicSet e = ergodic_measures_of_graph(g, 5, 10000);
      std::vector<PeriodicOrbitMeasure> sample;
      for (std::size_t k : sample_indices(e.measures.size(), 48, rng)) sample.push_back(e.measures[k]);
      sets.push_back(std::move(sample));
    }
    for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
      if (sets[i].empty() || sets[i + 1].empty()) continue;
      const RealMatrix d = pi_bar_matrix(sets[i], sets[i + 1], *sys, radius);
      const HullCheck hull = ergodic_hull_check(d, 32, rng, 0.05);
      worst = std::max(worst, hull.difference);
      out.ok = out.ok && hull.holds;
      ++pairs;
    }
  }
  out.ok = out.ok && pairs > 0;
  std::ostringstream os;
  os << pairs << " level pairs, P = 5, max difference " << worst;
  out.detail = os.str();
  return out;
}

// 8. Sigmund approximants approach the target mixture on doubling-grid(15).
Outcome density_demonstration() {
  Outcome out;
  PipelineConfig cfg = load_config(kData / "configs" / "circle_doubling_15.json");
  const SystemPtr sys = std::make_shared<const FiniteMetricSystem>(load_pipeline_system(cfg).system);
  const ChainGraph g(sys, 0.2);
  const ErgodicSet ergodic = ergodic_measures_of_graph(g, cfg.period_cap, cfg.enumeration_cap);
  const DensityReport report = density_demo(cfg, g, ergodic);
  std::optional<std::size_t> l_star;
  bool monotone = true;
  std::optional<double> previous;
  for (const DensityRow& row : report.rows) {
    if (!row.weakstar) {
      out.ok = false;
      continue;
    }
    if (!l_star && *row.weakstar < 0.05) l_star = row.block_scale;
    if (l_star && previous && *row.weakstar > *previous + 1e-12) monotone = false;
    if (l_star) previous = row.weakstar;
  }
  out.ok = out.ok && l_star && *l_star <= 256 && monotone;
  std::ostringstream os;
  if (l_star) {
    os << "L* = " << *l_star;
  } else {
    os << "no scale below 0.05";
  }
  os << (monotone ? ", non-increasing after L*" : ", increases after L*");
  out.detail = os.str();
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 9. Two CLI analyze runs agree byte for byte except for the timestamp.
Outcome determinism(double& seconds_per_run) {
  Outcome out;
  const fs::path root = fs::temp_directory_path() / ("deltachain_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const fs::path config = kData / "configs" / "circle_doubling_15.json";
  std::vector<std::string> reports;
  double total = 0.0;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    const std::string cmd = std::string("\"") + DELTACHAIN_CLI + "\" analyze --config \"" +
                            config.string() + "\" --out \"" + dir.string() + "\" > /dev/null";
    const auto start = std::chrono::steady_clock::now();
    const int status = std::system(cmd.c_str());
    total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (status != 0) {
      out.ok = false;
      out.detail = "analyze exited with status " + std::to_string(status);
      return out;
    }
    Json report = read_json_file(dir / "report.json");
    report.erase("generated_at");
    std::string all = report.dump(2);
    for (const char* f : {"levels.csv", "cross_level.csv", "density.csv", "levels.dat", "density.dat"}) {
      all += read_file(dir / f);
    }
    reports.push_back(all);
  }
  fs::remove_all(root);
  seconds_per_run = total / 2.0;
  out.ok = reports[0] == reports[1];
  out.detail = out.ok ? "reports identical" : "reports differ";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  double run_seconds = 0.0;
  const std::vector<Criterion> criteria{
      {1, "chain-graph axioms", 1.0, chain_graph_axioms},
      {2, "mixing constant", 1.0, mixing_constant},
      {3, "specification tracing", 30.0, specification_tracing},
      {4, "Besicovitch equivalence constants", 60.0, besicovitch_equivalence},
      {5, "rho-bar oracle equivalence", 120.0, rho_bar_oracles},
      {6, "sandwich inequalities", 30.0, sandwich},
      {7, "Hausdorff/ergodic consistency", 60.0, hull_consistency},
      {8, "density demonstration", 120.0, density_demonstration},
      {9, "determinism", 0.0, [&run_seconds] { return determinism(run_seconds); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // The determinism budget is twice a single pipeline run.
    const double limit = c.id == 9 ? 2.0 * run_seconds + 1.0 : c.limit_seconds;
    const bool in_time = seconds < limit;
    const bool ok = outcome.ok && in_time;
    if (!ok) ++failed;
    std::printf("%s criterion %d (%s): %s [%.2f s, limit %.2f s%s]\n", ok ? "PASS" : "FAIL", c.id,
                c.name.c_str(), outcome.detail.c_str(), seconds, limit,
                in_time ? "" : ", over time");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
