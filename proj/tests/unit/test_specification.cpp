#include <gtest/gtest.h>

#include <random>

#include "deltachain/error.hpp"
#include "deltachain/specification.hpp"
#include "test_support.hpp"

using namespace deltachain;
using dctest::share;

namespace {

// Segment over [a, b) whose source is a random walk of g on its margin window.
IntervalSegment walk_segment(const ChainGraph& g, Coord a, Coord b, std::int64_t n_win,
                             std::mt19937_64& rng) {
  const Coord lo = a - n_win + 1;
  const Coord hi = b + n_win - 2;
  return {a, b, FiniteTrajectory(lo, dctest::random_walk(g, static_cast<std::size_t>(hi - lo + 1), rng))};
}

MixingCertificate with_m(std::size_t m) {
  MixingCertificate c;
  c.strongly_connected = true;
  c.period = 1;
  c.mixing_constant = m;
  return c;
}

}  // namespace

TEST(SpacingConstant, Examples) {
  const SpacingConstant a = spacing_constant(0.5, with_m(2));
  EXPECT_EQ(a.window, 2);
  EXPECT_EQ(a.spacing, 4);
  const SpacingConstant b = spacing_constant(1.0, with_m(1));
  EXPECT_EQ(b.window, 1);
  EXPECT_EQ(b.spacing, 1);
  const SpacingConstant c = spacing_constant(1.0 / 3.0, with_m(5));
  EXPECT_EQ(c.window, 3);
  EXPECT_EQ(c.spacing, 9);
  EXPECT_EQ(spacing_constant(0.3, with_m(1)).window, 4);
}

TEST(SpacingConstant, NotMixing) {
  MixingCertificate c;
  c.strongly_connected = true;
  c.period = 2;
  try {
    spacing_constant(0.5, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMixing);
  }
}

TEST(TraceSpecification, FixedPointSegment) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  SpacedSpecification spec;
  spec.segments.push_back({0, 3, FiniteTrajectory(-1, {0, 0, 0, 0, 0})});
  const PeriodicChain y = trace_specification(spec, g, 0.5);
  EXPECT_EQ(y.period, 3u + 4u);
  for (PointId u : y.word) EXPECT_EQ(u, 0);
  EXPECT_TRUE(verify_trace(y, spec, g, 0.5).ok);
}

TEST(TraceSpecification, DoublingGridFourTwoSegments) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  SpacedSpecification spec;
  // margins [a-1, b]: chains 1 -> 2 -> 0 -> 0 -> 1 and 3 -> 2 -> 1 -> 3 -> 3
  spec.segments.push_back({0, 3, FiniteTrajectory(-1, {1, 2, 0, 0, 1})});
  spec.segments.push_back({7, 10, FiniteTrajectory(6, {3, 2, 1, 3, 3})});
  const PeriodicChain y = trace_specification(spec, g, 0.5);
  EXPECT_EQ(y.period, 14u);
  EXPECT_EQ(y.origin_offset, 1);
  EXPECT_TRUE(is_cyclic_delta_chain(y.word, g));
  for (const auto& s : spec.segments)
    for (Coord c = s.a - 1; c <= s.b; ++c) EXPECT_EQ(y.at(c), s.source.at(c));
  EXPECT_TRUE(verify_trace(y, spec, g, 0.5).ok);
}

TEST(TraceSpecification, InsufficientSpacing) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  SpacedSpecification spec;
  spec.segments.push_back({0, 3, FiniteTrajectory(-1, {1, 2, 0, 0, 1})});
  spec.segments.push_back({6, 9, FiniteTrajectory(5, {3, 2, 1, 3, 3})});
  try {
    trace_specification(spec, g, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientSpacing);
  }
}

TEST(TraceSpecification, InsufficientMarginAndInvalidSegment) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  SpacedSpecification spec;
  spec.segments.push_back({0, 3, FiniteTrajectory(0, {2, 0, 0, 1})});
  try {
    trace_specification(spec, g, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientMargin);
  }
  spec.segments[0] = {0, 3, FiniteTrajectory(-1, {0, 2, 0, 0, 1})};  // 0 -> 2 is not an edge
  try {
    trace_specification(spec, g, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidSegment);
  }
}

TEST(TraceSpecification, NotMixing) {
  const ChainGraph g(share(dctest::swap_pair()), 0.5);
  SpacedSpecification spec;
  spec.segments.push_back({0, 2, FiniteTrajectory(-1, {1, 0, 1, 0})});
  EXPECT_THROW(trace_specification(spec, g, 0.5), Error);
}

TEST(VerifyTrace, DetectsInWindowPerturbation) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  SpacedSpecification spec;
  spec.segments.push_back({0, 3, FiniteTrajectory(-1, {1, 2, 0, 0, 1})});
  spec.segments.push_back({7, 10, FiniteTrajectory(6, {3, 2, 1, 3, 3})});
  PeriodicChain y = trace_specification(spec, g, 0.5);
  // coordinate 1 of y carries 0; replace by 1/2, which is far (distance 1/2)
  PeriodicChain bad = y;
  bad.word[static_cast<std::size_t>(1 + bad.origin_offset)] = 2;
  const TraceReport r = verify_trace(bad, spec, g, 0.5);
  EXPECT_FALSE(r.ok);
}

TEST(VerifyTrace, GapPerturbationStillTraces) {
  const ChainGraph g(share(circle_doubling(4)), 0.25);
  SpacedSpecification spec;
  spec.segments.push_back({0, 3, FiniteTrajectory(-1, {1, 2, 0, 0, 1})});
  spec.segments.push_back({7, 10, FiniteTrajectory(6, {3, 2, 1, 3, 3})});
  const PeriodicChain y = trace_specification(spec, g, 0.5);
  // gap coordinates 4..5 are free; try every valid replacement of coordinate 4
  const std::size_t pos = static_cast<std::size_t>(4 + y.origin_offset);
  int tried = 0;
  for (PointId v = 0; v < 4; ++v) {
    PeriodicChain alt = y;
    alt.word[pos] = v;
    if (!is_cyclic_delta_chain(alt.word, g)) continue;
    ++tried;
    EXPECT_TRUE(verify_trace(alt, spec, g, 0.5).ok);
  }
  EXPECT_GE(tried, 1);
}

TEST(TraceSpecification, RandomSuiteWithLongerGaps) {
  const auto sys = share(circle_doubling(15));
  const ChainGraph g(sys, 0.2);
  std::mt19937_64 rng(31);
  for (double eps : {0.5, 1.0 / 3.0, 0.25}) {
    const SpacingConstant sc = spacing_constant(eps, mixing_certificate(g));
    for (int t = 0; t < 60; ++t) {
      SpacedSpecification spec;
      Coord a = 0;
      const int count = 1 + static_cast<int>(rng() % 4);
      const bool exact = t % 2 == 0;
      for (int i = 0; i < count; ++i) {
        const Coord b = a + 1 + static_cast<Coord>(rng() % 6);
        spec.segments.push_back(walk_segment(g, a, b, sc.window, rng));
        a = b + sc.spacing + (exact ? 0 : static_cast<Coord>(rng() % 4));
      }
      const PeriodicChain y = trace_specification(spec, g, eps);
      EXPECT_TRUE(verify_trace(y, spec, g, eps).ok);
      EXPECT_EQ(y.period, static_cast<std::size_t>(spec.segments.back().b + sc.spacing));
      // deterministic
      EXPECT_EQ(trace_specification(spec, g, eps).word, y.word);
    }
  }
}

TEST(MinimalPeriod, Words) {
  EXPECT_EQ(minimal_period({1, 2, 1, 2}), 2u);
  EXPECT_EQ(minimal_period({1, 1, 1}), 1u);
  EXPECT_EQ(minimal_period({1, 2, 3}), 3u);
}
