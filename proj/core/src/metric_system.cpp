#include "deltachain/metric_system.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "deltachain/error.hpp"

namespace deltachain {
namespace {

void check_metric(const RealMatrix& d) {
  const std::size_t n = d.rows();
  if (d.cols() != n) {
    throw Error(ErrorKind::NotAMetric, "distance matrix is not square");
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (std::abs(d(u, u)) > kDistanceTolerance) {
      std::ostringstream os;
      os << "nonzero diagonal at " << u;
      throw Error(ErrorKind::NotAMetric, os.str());
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!std::isfinite(d(u, v)) || d(u, v) < 0.0) {
        std::ostringstream os;
        os << "entry (" << u << ", " << v << ") is negative or not finite";
        throw Error(ErrorKind::NotAMetric, os.str());
      }
      if (std::abs(d(u, v) - d(v, u)) > kDistanceTolerance) {
        std::ostringstream os;
        os << "asymmetric pair (" << u << ", " << v << ")";
        throw Error(ErrorKind::NotAMetric, os.str());
      }
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t w = 0; w < n; ++w) {
        if (d(u, w) > d(u, v) + d(v, w) + kDistanceTolerance) {
          std::ostringstream os;
          os << "triangle inequality fails for triple (" << u << ", " << v << ", " << w << ")";
          throw Error(ErrorKind::NotAMetric, os.str());
        }
      }
    }
  }
}

}  // namespace

NormalizedMetric normalize_metric(const RealMatrix& raw) {
  check_metric(raw);
  NormalizedMetric out{raw, false};
  for (std::size_t u = 0; u < raw.rows(); ++u) {
    for (std::size_t v = 0; v < raw.cols(); ++v) {
      if (raw(u, v) > 1.0) {
        out.matrix(u, v) = 1.0;
        out.clamped = true;
      }
    }
  }
  return out;
}

FiniteMetricSystem::FiniteMetricSystem(RealMatrix dist, std::vector<PointId> map_image,
                                       std::vector<std::string> labels)
    : dist_(std::move(dist)), map_(std::move(map_image)), labels_(std::move(labels)) {
  if (map_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "system must have at least one point");
  }
  if (dist_.rows() != map_.size()) {
    throw Error(ErrorKind::InvalidArgument, "distance matrix and map sizes differ");
  }
  check_metric(dist_);
  for (std::size_t u = 0; u < map_.size(); ++u) {
    for (std::size_t v = 0; v < map_.size(); ++v) {
      if (dist_(u, v) > 1.0 + kDistanceTolerance) {
        throw Error(ErrorKind::NotAMetric, "distance above 1; normalize first");
      }
    }
    if (!valid_id(map_[u])) {
      std::ostringstream os;
      os << "map image of " << u << " is not a valid id";
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
  }
  if (labels_.empty()) {
    labels_.reserve(map_.size());
    for (std::size_t u = 0; u < map_.size(); ++u) labels_.push_back(std::to_string(u));
  } else if (labels_.size() != map_.size()) {
    throw Error(ErrorKind::InvalidArgument, "label count differs from point count");
  }
}

FiniteMetricSystem FiniteMetricSystem::from_raw(const RealMatrix& raw,
                                                std::vector<PointId> map_image,
                                                std::vector<std::string> labels, bool* clamped) {
  NormalizedMetric norm = normalize_metric(raw);
  if (clamped != nullptr) *clamped = norm.clamped;
  return FiniteMetricSystem(std::move(norm.matrix), std::move(map_image), std::move(labels));
}

PointId FiniteMetricSystem::iterate(PointId u, std::size_t k) const {
  for (std::size_t i = 0; i < k; ++i) u = map_[u];
  return u;
}

FiniteMetricSystem product_system(const FiniteMetricSystem& a, const FiniteMetricSystem& b,
                                  std::size_t cap) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  if (na > cap / nb) {
    std::ostringstream os;
    os << na << " x " << nb << " points exceeds cap " << cap;
    throw Error(ErrorKind::SizeOverflow, os.str());
  }
  const std::size_t n = na * nb;
  RealMatrix dist(n, n);
  std::vector<PointId> map(n);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const std::size_t u = i * nb + j;
      map[u] = static_cast<PointId>(a.map(i) * nb + b.map(j));
      labels[u] = "(" + a.label(i) + "," + b.label(j) + ")";
      for (std::size_t k = 0; k < na; ++k) {
        for (std::size_t l = 0; l < nb; ++l) {
          dist(u, k * nb + l) = std::max(a.dist(i, k), b.dist(j, l));
        }
      }
    }
  }
  return FiniteMetricSystem(std::move(dist), std::move(map), std::move(labels));
}

SurjectiveCore surjective_core(const FiniteMetricSystem& sys) {
  const std::size_t n = sys.size();
  std::vector<char> in(n, 1);
  std::size_t count = n;
  for (;;) {
    std::vector<char> next(n, 0);
    std::size_t next_count = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (in[u] && !next[sys.map(u)]) {
        next[sys.map(u)] = 1;
        ++next_count;
      }
    }
    in.swap(next);
    if (next_count == count) break;
    count = next_count;
  }

  std::vector<PointId> ids;
  std::vector<PointId> index(n, -1);
  for (std::size_t u = 0; u < n; ++u) {
    if (in[u]) {
      index[u] = static_cast<PointId>(ids.size());
      ids.push_back(static_cast<PointId>(u));
    }
  }
  RealMatrix dist(ids.size(), ids.size());
  std::vector<PointId> map(ids.size());
  std::vector<std::string> labels(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    map[i] = index[sys.map(ids[i])];
    labels[i] = sys.label(ids[i]);
    for (std::size_t j = 0; j < ids.size(); ++j) dist(i, j) = sys.dist(ids[i], ids[j]);
  }
  return SurjectiveCore{ids, FiniteMetricSystem(std::move(dist), std::move(map), std::move(labels))};
}

RealMatrix circle_grid_metric(std::size_t n) {
  RealMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t gap = i > j ? i - j : j - i;
      d(i, j) = static_cast<double>(std::min(gap, n - gap)) / static_cast<double>(n);
    }
  }
  return d;
}

RealMatrix line_grid_metric(std::size_t n) {
  RealMatrix d(n, n);
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t gap = i > j ? i - j : j - i;
      d(i, j) = static_cast<double>(gap) / denom;
    }
  }
  return d;
}

std::vector<std::string> grid_labels(std::size_t n, std::size_t denominator) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    labels.push_back(k == 0 ? "0" : std::to_string(k) + "/" + std::to_string(denominator));
  }
  return labels;
}

FiniteMetricSystem circle_doubling(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "grid size must be positive");
  std::vector<PointId> map(n);
  for (std::size_t k = 0; k < n; ++k) map[k] = static_cast<PointId>((2 * k) % n);
  return FiniteMetricSystem(circle_grid_metric(n), std::move(map), grid_labels(n, n));
}

FiniteMetricSystem circle_rotation(std::size_t n, std::int64_t k) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "grid size must be positive");
  const auto sn = static_cast<std::int64_t>(n);
  const std::int64_t shift = ((k % sn) + sn) % sn;
  std::vector<PointId> map(n);
  for (std::int64_t i = 0; i < sn; ++i) map[i] = static_cast<PointId>((i + shift) % sn);
  return FiniteMetricSystem(circle_grid_metric(n), std::move(map), grid_labels(n, n));
}

FiniteMetricSystem random_metric_system(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "system size must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_int_distribution<PointId> target(0, static_cast<PointId>(n - 1));
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = coord(rng);
    ys[i] = coord(rng);
  }
  RealMatrix raw(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) raw(i, j) = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
  }
  std::vector<PointId> map(n);
  for (auto& m : map) m = target(rng);
  return FiniteMetricSystem::from_raw(raw, std::move(map));
}

}  // namespace deltachain
