#include "deltachain/specification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "deltachain/error.hpp"

namespace deltachain {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

std::int64_t least_window(double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1]");
  return static_cast<std::int64_t>(std::ceil(1.0 / eps - 1e-9));
}

}  // namespace

PointId PeriodicChain::at(Coord k) const {
  if (word.empty()) throw Error(ErrorKind::InvalidArgument, "empty periodic chain");
  const auto p = static_cast<std::int64_t>(word.size());
  return word[static_cast<std::size_t>(floor_mod(k + origin_offset, p))];
}

FiniteTrajectory PeriodicChain::window(Coord lo, Coord hi) const {
  std::vector<PointId> entries;
  entries.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Coord k = lo; k <= hi; ++k) entries.push_back(at(k));
  return FiniteTrajectory(lo, std::move(entries));
}

std::size_t minimal_period(const std::vector<PointId>& word) {
  const std::size_t n = word.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = word[i] == word[(i + p) % n];
    if (ok) return p;
  }
  return n;
}

SpacingConstant spacing_constant(double eps, const MixingCertificate& cert) {
  if (!cert.mixing_constant) {
    throw Error(ErrorKind::NotMixing, "chain graph is not primitive; no mixing constant");
  }
  const std::int64_t n = least_window(eps);
  const auto m = static_cast<std::int64_t>(*cert.mixing_constant);
  return {n, 2 * n - 2 + m};
}

PeriodicChain trace_specification(const SpacedSpecification& spec, const ChainGraph& g,
                                  double eps) {
  const MixingCertificate cert = mixing_certificate(g);
  const SpacingConstant sc = spacing_constant(eps, cert);
  const std::int64_t n_win = sc.window;
  const auto& segs = spec.segments;
  if (segs.empty()) throw Error(ErrorKind::InvalidSegment, "specification has no segments");
  if (segs.front().a != 0) throw Error(ErrorKind::InvalidSegment, "first segment must start at 0");

  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    if (s.a >= s.b) {
      throw Error(ErrorKind::InvalidSegment, "segment " + std::to_string(i) + " has a >= b");
    }
    if (i > 0 && s.a - segs[i - 1].b < sc.spacing) {
      std::ostringstream os;
      os << "gap before segment " << i << " is " << s.a - segs[i - 1].b << " < k = " << sc.spacing;
      throw Error(ErrorKind::InsufficientSpacing, os.str());
    }
    const Coord lo = s.a - n_win + 1;
    const Coord hi = s.b + n_win - 2;
    if (!s.source.covers(lo, hi)) {
      std::ostringstream os;
      os << "segment " << i << " source must cover [" << lo << ", " << hi << "]";
      throw Error(ErrorKind::InsufficientMargin, os.str());
    }
    s.source.check_ids(g.system());
    for (Coord c = lo; c < hi; ++c) {
      if (!g.has_edge(s.source.at(c), s.source.at(c + 1))) {
        std::ostringstream os;
        os << "segment " << i << " source is not a delta-chain at coordinate " << c;
        throw Error(ErrorKind::InvalidSegment, os.str());
      }
    }
  }

  const std::int64_t period = segs.back().b + sc.spacing;
  const std::int64_t offset = n_win - 1;
  std::vector<PointId> word(static_cast<std::size_t>(period), -1);
  auto slot = [&](Coord c) -> PointId& {
    return word[static_cast<std::size_t>(floor_mod(c + offset, period))];
  };

  for (const auto& s : segs) {
    for (Coord c = s.a - n_win + 1; c <= s.b + n_win - 2; ++c) slot(c) = s.source.at(c);
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Coord end = segs[i].b + n_win - 2;
    const Coord next_start =
        (i + 1 < segs.size() ? segs[i + 1].a : period + segs.front().a) - n_win + 1;
    const auto steps = static_cast<std::size_t>(next_start - end);
    const std::vector<PointId> bridge = finite_chain(g, slot(end), slot(next_start), steps);
    for (std::size_t t = 1; t < steps; ++t) slot(end + static_cast<Coord>(t)) = bridge[t];
  }

  return PeriodicChain{std::move(word), static_cast<std::size_t>(period), offset};
}

TraceReport verify_trace(const PeriodicChain& y, const SpacedSpecification& spec,
                         const ChainGraph& g, double eps) {
  TraceReport report;
  auto fail = [&](std::string why, std::optional<std::size_t> seg = std::nullopt,
                  std::optional<Coord> shift = std::nullopt) {
    report.ok = false;
    report.failure = std::move(why);
    report.segment = seg;
    report.shift = shift;
    return report;
  };

  if (y.word.empty() || y.period != y.word.size()) return fail("period does not match word length");
  if (y.period % minimal_period(y.word) != 0) return fail("minimal period does not divide period");
  if (!is_cyclic_delta_chain(y.word, g)) return fail("word is not a cyclic delta-chain");

  const std::int64_t radius = window_radius(eps);
  for (std::size_t i = 0; i < spec.segments.size(); ++i) {
    const auto& s = spec.segments[i];
    if (!s.source.covers(s.a - radius, s.b - 1 + radius)) {
      return fail("segment source does not cover the tracing window", i);
    }
    const FiniteTrajectory traced = y.window(s.a - radius, s.b - 1 + radius);
    for (Coord j = s.a; j < s.b; ++j) {
      if (!window_check(g.system(), eps, traced, s.source, j)) {
        std::ostringstream os;
        os << "pi(S^" << j << " y, S^" << j << " x) >= eps for segment " << i;
        return fail(os.str(), i, j);
      }
    }
  }
  return report;
}

}  // namespace deltachain
