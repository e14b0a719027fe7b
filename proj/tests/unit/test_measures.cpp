#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../common/oracles.hpp"
#include "deltachain/error.hpp"
#include "deltachain/lp.hpp"
#include "deltachain/measures.hpp"
#include "deltachain/transport.hpp"
#include "test_support.hpp"

using namespace deltachain;
using dctest::discrete_cost;
using dctest::share;

namespace {

Word random_word(std::mt19937_64& rng, std::size_t max_len, std::size_t alphabet) {
  Word w(1 + rng() % max_len);
  for (auto& x : w) x = static_cast<PointId>(rng() % alphabet);
  return w;
}

RealMatrix random_metric_cost(std::size_t n, std::uint64_t seed) {
  return random_metric_system(n, seed).distances();
}

}  // namespace

TEST(Lp, SmallProblems) {
  // min -x1 - x2, x1 + x2 + s = 1
  StandardFormLp lp;
  lp.a = RealMatrix(1, 3, 1.0);
  lp.b = {1.0};
  lp.c = {-1.0, -2.0, 0.0};
  const LpSolution s = solve_lp(lp);
  EXPECT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, -2.0, 1e-12);

  StandardFormLp bad;
  bad.a = RealMatrix(1, 1, 1.0);
  bad.b = {-1.0};
  bad.c = {1.0};
  EXPECT_EQ(solve_lp(bad).status, LpStatus::Infeasible);

  StandardFormLp unb;
  unb.a = RealMatrix(1, 2);
  unb.a(0, 0) = 1.0;
  unb.a(0, 1) = -1.0;
  unb.b = {0.0};
  unb.c = {-1.0, 0.0};
  EXPECT_EQ(solve_lp(unb).status, LpStatus::Unbounded);
}

TEST(Transport, MatchesDenseSimplex) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + rng() % 6, m = 1 + rng() % 6;
    std::vector<double> a(n), b(m);
    for (auto& x : a) x = rng() % 4 == 0 ? 0.0 : u(rng);
    for (auto& x : b) x = rng() % 4 == 0 ? 0.0 : u(rng);
    a[0] += 0.1;
    b[0] += 0.1;
    const double sa = std::accumulate(a.begin(), a.end(), 0.0);
    const double sb = std::accumulate(b.begin(), b.end(), 0.0);
    for (auto& x : a) x /= sa;
    for (auto& x : b) x /= sb;
    RealMatrix c(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) c(i, j) = std::round(u(rng) * 8) / 8;
    const TransportPlan plan = solve_transport(a, b, c);
    EXPECT_NEAR(plan.cost, oracle::transport_lp(a, b, c), 1e-9);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        EXPECT_GE(plan.flow(i, j), -1e-12);
        row += plan.flow(i, j);
        total += plan.flow(i, j) * c(i, j);
      }
      EXPECT_NEAR(row, a[i], 1e-9);
    }
    for (std::size_t j = 0; j < m; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < n; ++i) col += plan.flow(i, j);
      EXPECT_NEAR(col, b[j], 1e-9);
    }
    EXPECT_NEAR(total, plan.cost, 1e-9);
  }
}

TEST(FiniteMeasureTest, Validation) {
  EXPECT_NO_THROW((FiniteMeasure{{0.5, 0.5}}.validate()));
  EXPECT_THROW((FiniteMeasure{{0.5, 0.6}}.validate()), Error);
  EXPECT_THROW((FiniteMeasure{{1.5, -0.5}}.validate()), Error);
  EXPECT_EQ(FiniteMeasure::dirac(3, 1).weights, (std::vector<double>{0, 1, 0}));
}

TEST(Words, CanonicalForm) {
  EXPECT_EQ(primitive_root({1, 2, 1, 2}), (Word{1, 2}));
  EXPECT_EQ(primitive_root({1, 1, 2}), (Word{1, 1, 2}));
  EXPECT_EQ(least_rotation({2, 0, 1}), (Word{0, 1, 2}));
  EXPECT_EQ(least_rotation({1, 0, 1, 0, 0}), (Word{0, 0, 1, 0, 1}));
  EXPECT_EQ(PeriodicOrbitMeasure({2, 1, 2, 1}).word(), (Word{1, 2}));
  EXPECT_EQ(PeriodicOrbitMeasure({1, 0, 0}), PeriodicOrbitMeasure({0, 1, 0}));
}

TEST(EmpiricalMeasure, Examples) {
  const CylinderDistributions fixed = empirical_measure(PeriodicOrbitMeasure({3}), 3);
  for (std::size_t w = 0; w < 3; ++w) {
    ASSERT_EQ(fixed[w].mass.size(), 1u);
    EXPECT_EQ(fixed[w].mass.begin()->first, Word(w + 1, 3));
  }
  const CylinderDistributions two = empirical_measure(PeriodicOrbitMeasure({0, 1}), 1);
  EXPECT_DOUBLE_EQ(two[0].mass.at({0}), 0.5);
  EXPECT_DOUBLE_EQ(two[0].mass.at({1}), 0.5);
  const CylinderDistributions three = empirical_measure(PeriodicOrbitMeasure({0, 0, 1}), 2);
  ASSERT_EQ(three[1].mass.size(), 3u);
  for (const Word& b : {Word{0, 0}, Word{0, 1}, Word{1, 0}}) {
    EXPECT_NEAR(three[1].mass.at(b), 1.0 / 3.0, 1e-15);
  }
  const FiniteMeasure m = marginal(three, 2);
  EXPECT_NEAR(m.weights[0], 2.0 / 3.0, 1e-15);
}

TEST(W1, Examples) {
  const RealMatrix c = discrete_cost(2);
  EXPECT_NEAR(w1_distance({{0.3, 0.7}}, {{0.3, 0.7}}, c).value, 0.0, 1e-15);
  EXPECT_NEAR(w1_distance({{1.0, 0.0}}, {{0.5, 0.5}}, c).value, 0.5, 1e-15);
  EXPECT_NEAR(w1_distance({{1.0, 0.0}}, {{0.0, 1.0}}, c).value, 1.0, 1e-15);
}

TEST(RhoBarPeriodic, Examples) {
  const RealMatrix c = discrete_cost(2);
  EXPECT_EQ(rho_bar_periodic(PeriodicOrbitMeasure({0, 1}), PeriodicOrbitMeasure({0, 1}), c).value, 0.0);
  EXPECT_EQ(rho_bar_periodic(PeriodicOrbitMeasure({0, 1}), PeriodicOrbitMeasure({1, 0}), c).value, 0.0);
  // gcd 1, L = 6: (uv)^3 against (uuv)^2 differs at t = 1, 2, 3
  const Word uv{0, 1}, uuv{0, 0, 1};
  double mismatches = 0;
  for (int t = 0; t < 6; ++t) mismatches += uv[t % 2] != uuv[t % 3];
  EXPECT_EQ(mismatches, 3);
  EXPECT_NEAR(rho_bar_periodic(PeriodicOrbitMeasure(uv), PeriodicOrbitMeasure(uuv), c).value, 0.5, 1e-15);
  EXPECT_NEAR(oracle::orbit_coupling_lp(uv, uuv, c), 0.5, 1e-9);
}

TEST(RhoBarPeriodic, MetricProperties) {
  const RealMatrix cost = random_metric_cost(4, 21);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 300; ++t) {
    const PeriodicOrbitMeasure a(random_word(rng, 6, 4)), b(random_word(rng, 6, 4)),
        c(random_word(rng, 6, 4));
    const double ab = rho_bar_periodic(a, b, cost).value;
    EXPECT_NEAR(ab, rho_bar_periodic(b, a, cost).value, 1e-12);
    EXPECT_LE(rho_bar_periodic(a, c, cost).value,
              ab + rho_bar_periodic(b, c, cost).value + 1e-9);
    EXPECT_EQ(ab == 0.0, a == b);
  }
}

TEST(RhoBarPeriodic, MatchesOrbitCouplingLp) {
  const RealMatrix cost = random_metric_cost(3, 4);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 120; ++t) {
    const Word p = random_word(rng, 5, 3), q = random_word(rng, 5, 3);
    const PeriodicOrbitMeasure pm(p), qm(q);
    EXPECT_NEAR(rho_bar_periodic(pm, qm, cost).value,
                oracle::orbit_coupling_lp(pm.word(), qm.word(), cost), 1e-9);
  }
}

TEST(RhoBarPeriodic, Sandwich) {
  const RealMatrix cost = random_metric_cost(5, 2);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const PeriodicOrbitMeasure a(random_word(rng, 7, 5)), b(random_word(rng, 7, 5));
    const double rb = rho_bar_periodic(a, b, cost).value;
    const double w1 = w1_distance(marginal(empirical_measure(a, 1), 5),
                                  marginal(empirical_measure(b, 1), 5), cost).value;
    EXPECT_LE(w1, rb + 1e-9);
    EXPECT_LE(rb, aligned_average(a, b, cost) + 1e-9);
  }
}

TEST(PiBarPeriodic, Examples) {
  const FiniteMetricSystem sys = circle_doubling(8);
  const std::int64_t k = 6;
  const double tail = 1.0 / (k + 2);
  const PeriodicOrbitMeasure w({1, 2, 4});
  EXPECT_LE(pi_bar_periodic(w, w, sys, k).value, tail + 1e-15);
  // fixed points at distance 3/8
  const PhaseResult fp = pi_bar_periodic(PeriodicOrbitMeasure({0}), PeriodicOrbitMeasure({3}), sys, k);
  EXPECT_NEAR(fp.value, 0.375, 1e-15);
  EXPECT_DOUBLE_EQ(fp.error_bar, tail);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const PeriodicOrbitMeasure a(random_word(rng, 5, 8)), b(random_word(rng, 5, 8));
    EXPECT_GE(pi_bar_periodic(a, b, sys, k).value,
              rho_bar_periodic(a, b, sys.distances()).value - tail - 1e-12);
  }
}

TEST(Markov, StationaryAndMixture) {
  RealMatrix p(2, 2);
  p(0, 0) = 0.9;
  p(0, 1) = 0.1;
  p(1, 0) = 0.3;
  p(1, 1) = 0.7;
  const MarkovMeasure m(p, {0, 1});
  EXPECT_NEAR(m.stationary()[0], 0.75, 1e-12);
  const MarkovMeasure mix =
      MarkovMeasure::from_mixture({PeriodicOrbitMeasure({0}), PeriodicOrbitMeasure({1, 2})}, {0.5, 0.5});
  EXPECT_EQ(mix.states(), 3u);
  const FiniteMeasure lm = mix.label_marginal(3);
  EXPECT_NEAR(lm.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(lm.weights[1], 0.25, 1e-12);
  RealMatrix bad(2, 2, 0.5);
  EXPECT_THROW(MarkovMeasure(bad, {0, 1}, {0.9, 0.1}), Error);
}

TEST(Markov, CylindersMatchPeriodic) {
  const PeriodicOrbitMeasure w({0, 1, 1, 2});
  const auto a = MarkovMeasure::from_periodic(w).cylinders(3);
  const auto b = empirical_measure(w, 3);
  for (std::size_t d = 0; d < 3; ++d) {
    ASSERT_EQ(a[d].mass.size(), b[d].mass.size());
    for (const auto& [k, v] : b[d].mass) EXPECT_NEAR(a[d].mass.at(k), v, 1e-12);
  }
}

TEST(RhoBarMarkov, Examples) {
  const RealMatrix cost = random_metric_cost(3, 9);
  RealMatrix p(3, 3, 1.0 / 3.0);
  const MarkovMeasure m(p, {0, 1, 2});
  EXPECT_NEAR(rho_bar_markov_upper(m, m, cost).value, 0.0, 1e-9);
  const MarkovMeasure u = MarkovMeasure::from_periodic(PeriodicOrbitMeasure({0}));
  const MarkovMeasure v = MarkovMeasure::from_periodic(PeriodicOrbitMeasure({2}));
  EXPECT_NEAR(rho_bar_markov_upper(u, v, cost).value, cost(0, 2), 1e-9);
}

TEST(RhoBarMarkov, PeriodicEncodingsAreExact) {
  const RealMatrix cost = random_metric_cost(4, 6);
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const PeriodicOrbitMeasure a(random_word(rng, 5, 4)), b(random_word(rng, 5, 4));
    const CouplingResult r = rho_bar_markov_upper(MarkovMeasure::from_periodic(a),
                                                  MarkovMeasure::from_periodic(b), cost);
    EXPECT_NEAR(r.value, rho_bar_periodic(a, b, cost).value, 1e-9);
    ASSERT_TRUE(r.lower_bound.has_value());
    EXPECT_LE(*r.lower_bound, r.value + 1e-9);
    double objective = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < r.plan.rows(); ++i)
      for (std::size_t j = 0; j < r.plan.cols(); ++j) {
        mass += r.plan(i, j);
        objective += r.plan(i, j) * cost(a.at(i), b.at(j));
      }
    EXPECT_NEAR(mass, 1.0, 1e-9);
    EXPECT_NEAR(objective, r.value, 1e-9);
  }
}

TEST(RhoBarMarkov, BetweenBoundsForRandomChains) {
  const RealMatrix cost = random_metric_cost(3, 1);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int t = 0; t < 20; ++t) {
    RealMatrix pa(3, 3), pb(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      double sa = 0, sb = 0;
      for (std::size_t j = 0; j < 3; ++j) {
        sa += pa(i, j) = u(rng);
        sb += pb(i, j) = u(rng);
      }
      for (std::size_t j = 0; j < 3; ++j) {
        pa(i, j) /= sa;
        pb(i, j) /= sb;
      }
    }
    const CouplingResult r = rho_bar_markov_upper(MarkovMeasure(pa, {0, 1, 2}), MarkovMeasure(pb, {0, 1, 2}), cost);
    EXPECT_LE(*r.lower_bound, r.value + 1e-9);
    EXPECT_LE(r.value, 1.0);
  }
}

TEST(Hausdorff, Examples) {
  RealMatrix same(2, 2, 0.0);
  same(0, 1) = same(1, 0) = 0.4;
  EXPECT_EQ(hausdorff_distance(same), 0.0);
  RealMatrix one_two(1, 2);
  one_two(0, 0) = 0.0;
  one_two(0, 1) = 0.3;
  EXPECT_DOUBLE_EQ(hausdorff_distance(one_two), 0.3);
  RealMatrix single(1, 1, 0.7);
  EXPECT_DOUBLE_EQ(hausdorff_distance(single), 0.7);
  EXPECT_THROW(hausdorff_distance(RealMatrix(0, 2)), Error);
  const double cb = hausdorff_distance(2, 3, [](std::size_t i, std::size_t j) {
    return std::abs(static_cast<double>(i) - static_cast<double>(j)) / 4;
  });
  EXPECT_DOUBLE_EQ(cb, 0.25);
}

TEST(Hausdorff, PseudometricOnMeasureSets) {
  const RealMatrix cost = random_metric_cost(4, 3);
  std::mt19937_64 rng(41);
  auto random_set = [&] {
    std::vector<PeriodicOrbitMeasure> s;
    for (std::size_t i = 0, n = 1 + rng() % 4; i < n; ++i) s.emplace_back(random_word(rng, 4, 4));
    return s;
  };
  auto h = [&](const auto& a, const auto& b) {
    return hausdorff_distance(a.size(), b.size(), [&](std::size_t i, std::size_t j) {
      return rho_bar_periodic(a[i], b[j], cost).value;
    });
  };
  for (int t = 0; t < 100; ++t) {
    const auto a = random_set(), b = random_set(), c = random_set();
    EXPECT_EQ(h(a, a), 0.0);
    EXPECT_NEAR(h(a, b), h(b, a), 1e-12);
    EXPECT_LE(h(a, c), h(a, b) + h(b, c) + 1e-9);
  }
}

TEST(MixtureDistance, TransportAndHull) {
  RealMatrix d(2, 2);
  d(0, 0) = 0.0;
  d(0, 1) = 1.0;
  d(1, 0) = 1.0;
  d(1, 1) = 0.0;
  EXPECT_NEAR(mixture_distance({0.5, 0.5}, {0.5, 0.5}, d), 0.0, 1e-12);
  EXPECT_NEAR(mixture_distance({1.0, 0.0}, {0.5, 0.5}, d), 0.5, 1e-12);
  EXPECT_NEAR(distance_to_hull({0.5, 0.5}, d), 0.0, 1e-12);
  RealMatrix e(2, 1);
  e(0, 0) = 0.2;
  e(1, 0) = 0.6;
  EXPECT_NEAR(distance_to_hull({0.5, 0.5}, e), 0.4, 1e-12);
}

TEST(Ergodic, PermutationCycles) {
  // permutation (0 1 2)(3)(4 5) at delta 0
  const ChainGraph g(share(dctest::discrete_system({1, 2, 0, 3, 5, 4})), 0.0);
  const ErgodicSet e = ergodic_measures_of_graph(g, 6, 100);
  ASSERT_EQ(e.measures.size(), 3u);
  EXPECT_EQ(e.measures[0].word(), (Word{3}));
  EXPECT_EQ(e.measures[1].word(), (Word{4, 5}));
  EXPECT_EQ(e.measures[2].word(), (Word{0, 1, 2}));
  EXPECT_FALSE(e.truncated);
}

TEST(Ergodic, CompleteGraphOnTwoPoints) {
  const ChainGraph g(share(dctest::swap_pair()), 1.0);
  const ErgodicSet e = ergodic_measures_of_graph(g, 2, 100);
  ASSERT_EQ(e.measures.size(), 3u);
  EXPECT_EQ(e.measures[2].word(), (Word{0, 1}));
}

TEST(Ergodic, DoublingGridFourFixedPoints) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  const ErgodicSet e = ergodic_measures_of_graph(g, 1, 100);
  ASSERT_EQ(e.measures.size(), 3u);
  EXPECT_EQ(e.measures[0].word(), (Word{0}));
  EXPECT_EQ(e.measures[1].word(), (Word{1}));
  EXPECT_EQ(e.measures[2].word(), (Word{3}));
}

TEST(Ergodic, MatchesBruteForceAndTruncates) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const ChainGraph g(share(random_metric_system(6, seed)), 0.3);
    const ErgodicSet e = ergodic_measures_of_graph(g, 4, 100000);
    const std::set<Word> brute = oracle::simple_cycles_brute(g, 4);
    std::set<Word> got;
    for (const auto& m : e.measures) got.insert(m.word());
    EXPECT_EQ(got, brute);
    EXPECT_EQ(got.size(), e.measures.size());
    if (e.measures.size() > 3) {
      const ErgodicSet cut = ergodic_measures_of_graph(g, 4, 3);
      EXPECT_TRUE(cut.truncated);
      ASSERT_EQ(cut.measures.size(), 3u);
      for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(cut.measures[i], e.measures[i]);
    }
  }
}

TEST(Sigmund, SingleComponent) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  const PeriodicOrbitMeasure c({1, 3});
  for (std::size_t l : {4, 9, 30}) {
    EXPECT_EQ(sigmund_approximation({{c, {1, 1}}}, g, l), c);
  }
}

TEST(Sigmund, CompleteGraphBlocks) {
  const ChainGraph g(share(dctest::swap_pair()), 1.0);
  const std::vector<WeightedOrbit> target{{PeriodicOrbitMeasure({0}), {1, 2}},
                                          {PeriodicOrbitMeasure({1}), {1, 2}}};
  for (std::size_t m : {2, 5, 10}) {
    const PeriodicOrbitMeasure approx = sigmund_approximation(target, g, 2 * m);
    Word expect(m, 0);
    expect.insert(expect.end(), m, 1);
    EXPECT_EQ(approx, PeriodicOrbitMeasure(expect));
    const auto a = empirical_measure(approx, 2);
    const auto t = mix_cylinders({empirical_measure(target[0].measure, 2),
                                  empirical_measure(target[1].measure, 2)},
                                 {0.5, 0.5});
    const RealMatrix c = g.system().distances();
    EXPECT_NEAR(w1_distance(marginal(a, 2), marginal(t, 2), c).value, 0.0, 1e-12);
    // two boundary blocks out of 2m carry mass 1/m of length-2 mismatch
    EXPECT_NEAR(weakstar_proxy(a, t, 2, g.system()) , 0.25 * (1.0 / m), 1e-12);
  }
}

TEST(Sigmund, DoublingGridFourDecreasing) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  const std::vector<WeightedOrbit> target{{PeriodicOrbitMeasure({0}), {1, 2}},
                                          {PeriodicOrbitMeasure({1}), {1, 2}}};
  const auto t = mix_cylinders({empirical_measure(target[0].measure, 3),
                                empirical_measure(target[1].measure, 3)},
                               {0.5, 0.5});
  double previous = 2.0;
  for (std::size_t l : {8, 16, 32}) {
    const PeriodicOrbitMeasure approx = sigmund_approximation(target, g, l);
    EXPECT_TRUE(is_cyclic_delta_chain(approx.word(), g));
    const double d = weakstar_proxy(empirical_measure(approx, 3), t, 3, g.system());
    EXPECT_LT(d, previous);
    previous = d;
  }
}

TEST(Sigmund, Errors) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  const std::vector<WeightedOrbit> target{{PeriodicOrbitMeasure({0}), {1, 10}},
                                          {PeriodicOrbitMeasure({1}), {9, 10}}};
  try {
    sigmund_approximation(target, g, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateWeights);
  }
  const ChainGraph swap(share(dctest::swap_pair()), 0.5);
  try {
    sigmund_approximation({{PeriodicOrbitMeasure({0, 1}), {1, 2}}, {PeriodicOrbitMeasure({1, 0}), {1, 2}}},
                          swap, 8);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMixing);
  }
}

TEST(WeakStar, Examples) {
  const FiniteMetricSystem sys = circle_doubling(8);
  const auto a = empirical_measure(PeriodicOrbitMeasure({1, 2, 4}), 3);
  EXPECT_NEAR(weakstar_proxy(a, a, 3, sys), 0.0, 1e-15);
  const auto u = empirical_measure(PeriodicOrbitMeasure({0}), 3);
  const auto v = empirical_measure(PeriodicOrbitMeasure({3}), 3);
  EXPECT_NEAR(weakstar_proxy(u, v, 3, sys), (1 - 0.125) * 0.375, 1e-12);
  EXPECT_THROW(weakstar_proxy(u, empirical_measure(PeriodicOrbitMeasure({3}), 2), 3, sys), Error);
}

TEST(WeakStar, DominatedByRhoBar) {
  const FiniteMetricSystem sys = random_metric_system(5, 12);
  std::mt19937_64 rng(19);
  for (int t = 0; t < 150; ++t) {
    const PeriodicOrbitMeasure a(random_word(rng, 6, 5)), b(random_word(rng, 6, 5));
    const double w = weakstar_proxy(empirical_measure(a, 3), empirical_measure(b, 3), 3, sys);
    EXPECT_LE(w, rho_bar_periodic(a, b, sys.distances()).value + 0.125 + 1e-9);
  }
}
