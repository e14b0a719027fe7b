#include "deltachain/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "deltachain/error.hpp"

namespace deltachain {

FiniteTrajectory::FiniteTrajectory(Coord origin, std::vector<PointId> entries)
    : origin_(origin), entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "trajectory must be non-empty");
  }
}

FiniteTrajectory FiniteTrajectory::orbit(const FiniteMetricSystem& sys, PointId u, std::size_t len,
                                         Coord first) {
  std::vector<PointId> entries;
  entries.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    entries.push_back(u);
    u = sys.map(u);
  }
  return FiniteTrajectory(first, std::move(entries));
}

PointId FiniteTrajectory::at(Coord k) const {
  if (k < first() || k > last()) {
    std::ostringstream os;
    os << "coordinate " << k << " outside window [" << first() << ", " << last() << "]";
    throw Error(ErrorKind::InsufficientWindow, os.str());
  }
  return entries_[static_cast<std::size_t>(k - origin_)];
}

void FiniteTrajectory::check_ids(const FiniteMetricSystem& sys) const {
  for (PointId u : entries_) {
    if (!sys.valid_id(u)) {
      throw Error(ErrorKind::InvalidArgument, "trajectory id " + std::to_string(u) + " invalid");
    }
  }
}

void require_coverage(const FiniteTrajectory& x, const FiniteTrajectory& y, Coord lo, Coord hi) {
  if (!x.covers(lo, hi) || !y.covers(lo, hi)) {
    std::ostringstream os;
    os << "trajectories must cover [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::InsufficientWindow, os.str());
  }
}

double pi_truncated(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                    const FiniteTrajectory& y, std::int64_t radius, Coord shift) {
  if (radius < 0) throw Error(ErrorKind::InvalidArgument, "radius must be nonnegative");
  require_coverage(x, y, shift - radius, shift + radius);
  double best = 0.0;
  for (std::int64_t k = -radius; k <= radius; ++k) {
    const double cap = 1.0 / static_cast<double>(std::abs(k) + 1);
    if (cap <= best) continue;
    best = std::max(best, std::min(sys.dist(x.at(shift + k), y.at(shift + k)), cap));
  }
  return best;
}

PiDistance pi_distance(const FiniteMetricSystem& sys, const FiniteTrajectory& x,
                       const FiniteTrajectory& y, std::int64_t radius, Coord shift) {
  if (radius < 1) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  const double tail = 1.0 / static_cast<double>(radius + 2);
  const double seen = pi_truncated(sys, x, y, radius, shift);
  if (seen > tail + kDistanceTolerance) return {seen, true};
  return {tail, false};
}

std::int64_t window_radius(double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1]");
  }
  const double bound = std::max(1.0, 1.0 / eps);
  return static_cast<std::int64_t>(std::floor(bound + 1e-9)) - 1;
}

bool window_check(const FiniteMetricSystem& sys, double eps, const FiniteTrajectory& x,
                  const FiniteTrajectory& y, Coord shift) {
  const std::int64_t r = window_radius(eps);
  require_coverage(x, y, shift - r, shift + r);
  for (std::int64_t k = -r; k <= r; ++k) {
    if (!lt_tol(sys.dist(x.at(shift + k), y.at(shift + k)), eps)) return false;
  }
  return true;
}

}  // namespace deltachain
