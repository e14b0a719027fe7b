#include "deltachain/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "deltachain/error.hpp"

namespace deltachain {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kDriveOutTolerance = 1e-7;
constexpr std::size_t kRefactorInterval = 32;

// Revised simplex over [A | I] with an explicit basis inverse. The inverse is
// updated by eta pivots and rebuilt from the original data periodically, so
// round-off cannot accumulate across a long degenerate run.
class RevisedSimplex {
 public:
  RevisedSimplex(const StandardFormLp& lp, const SimplexOptions& options)
      : m_(lp.b.size()), n_(lp.c.size()), tol_(options.tolerance), cap_(options.max_iterations) {
    if (lp.a.rows() != m_ || lp.a.cols() != n_) {
      throw Error(ErrorKind::InvalidArgument, "LP dimensions are inconsistent");
    }
    a_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(n_ + m_));
    b_.resize(static_cast<Eigen::Index>(m_));
    for (std::size_t r = 0; r < m_; ++r) {
      const double sign = lp.b[r] < 0.0 ? -1.0 : 1.0;
      const auto ri = static_cast<Eigen::Index>(r);
      for (std::size_t j = 0; j < n_; ++j) a_(ri, static_cast<Eigen::Index>(j)) = sign * lp.a(r, j);
      a_(ri, static_cast<Eigen::Index>(n_ + r)) = 1.0;
      b_(ri) = sign * lp.b[r];
    }
    basis_.resize(m_);
    basic_.assign(n_ + m_, false);
    for (std::size_t r = 0; r < m_; ++r) {
      basis_[r] = n_ + r;
      basic_[n_ + r] = true;
    }
    refactor();
  }

  LpSolution run(const std::vector<double>& cost) {
    LpSolution out;
    std::vector<double> phase1(n_ + m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) phase1[n_ + r] = 1.0;
    if (!optimize(phase1, n_ + m_)) throw Error(ErrorKind::Infeasible, "phase 1 unbounded");
    if (objective(phase1) > std::max(tol_, 1e-7)) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    drive_out_artificials();

    std::vector<double> phase2(n_ + m_, 0.0);
    std::copy(cost.begin(), cost.end(), phase2.begin());
    if (!optimize(phase2, n_)) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    refactor();
    out.status = LpStatus::Optimal;
    out.x.assign(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) out.x[basis_[r]] = std::max(0.0, xb_(static_cast<Eigen::Index>(r)));
    }
    for (std::size_t j = 0; j < n_; ++j) out.objective += cost[j] * out.x[j];
    return out;
  }

 private:
  void refactor() {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd basis_matrix(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      basis_matrix.col(r) = a_.col(static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(r)]));
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    binv_ = lu.inverse();
    xb_ = lu.solve(b_);
    since_refactor_ = 0;
  }

  double objective(const std::vector<double>& cost) const {
    double z = 0.0;
    for (std::size_t r = 0; r < m_; ++r) z += cost[basis_[r]] * xb_(static_cast<Eigen::Index>(r));
    return z;
  }

  void pivot(std::size_t leave, std::size_t enter, const Eigen::VectorXd& alpha, double theta) {
    const auto l = static_cast<Eigen::Index>(leave);
    xb_ -= theta * alpha;
    xb_(l) = theta;
    binv_.row(l) /= alpha(l);
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(m_); ++r) {
      if (r != l && alpha(r) != 0.0) binv_.row(r) -= alpha(r) * binv_.row(l);
    }
    basic_[basis_[leave]] = false;
    basic_[enter] = true;
    basis_[leave] = enter;
    if (++since_refactor_ >= kRefactorInterval) refactor();
  }

  // Returns false when unbounded. Only columns < limit may enter. Dantzig
  // pricing, falling back to Bland's rule while the objective stalls.
  bool optimize(const std::vector<double>& cost, std::size_t limit) {
    const auto m = static_cast<Eigen::Index>(m_);
    std::size_t stalled = 0;
    double last = objective(cost);
    Eigen::VectorXd cb(m);
    for (;;) {
      if (++iterations_ > cap_) {
        throw Error(ErrorKind::SolverIterationCap, "simplex iteration cap reached");
      }
      const bool bland = stalled > 20;
      for (Eigen::Index r = 0; r < m; ++r) cb(r) = cost[basis_[static_cast<std::size_t>(r)]];
      const Eigen::VectorXd y = binv_.transpose() * cb;
      std::size_t enter = limit;
      double best = -tol_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (basic_[j]) continue;
        const double rc = cost[j] - y.dot(a_.col(static_cast<Eigen::Index>(j)));
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter == limit) return true;

      const Eigen::VectorXd alpha = binv_ * a_.col(static_cast<Eigen::Index>(enter));
      // Harris two-pass ratio test.
      double bound = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < m; ++r) {
        if (alpha(r) > kPivotTolerance) {
          bound = std::min(bound, (std::max(xb_(r), 0.0) + tol_) / alpha(r));
        }
      }
      if (bound == std::numeric_limits<double>::infinity()) return false;
      std::size_t leave = m_;
      double best_alpha = 0.0;
      for (Eigen::Index r = 0; r < m; ++r) {
        if (alpha(r) <= kPivotTolerance) continue;
        if (std::max(xb_(r), 0.0) / alpha(r) > bound) continue;
        const auto ru = static_cast<std::size_t>(r);
        const bool better =
            bland ? (leave == m_ || basis_[ru] < basis_[leave]) : alpha(r) > best_alpha;
        if (better) {
          leave = ru;
          best_alpha = alpha(r);
        }
      }
      const auto l = static_cast<Eigen::Index>(leave);
      pivot(leave, enter, alpha, std::max(xb_(l), 0.0) / alpha(l));
      const double now = objective(cost);
      if (now < last - 1e-12) {
        stalled = 0;
        last = now;
      } else {
        ++stalled;
      }
    }
  }

  // Replaces zero-level artificials by structural columns where possible.
  // Those that remain sit on redundant rows and stay at zero.
  void drive_out_artificials() {
    const auto structural = a_.leftCols(static_cast<Eigen::Index>(n_));
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      const Eigen::RowVectorXd row = binv_.row(static_cast<Eigen::Index>(r)) * structural;
      std::size_t col = n_;
      double best = kDriveOutTolerance;
      for (std::size_t j = 0; j < n_; ++j) {
        const double v = std::abs(row(static_cast<Eigen::Index>(j)));
        if (!basic_[j] && v > best) {
          best = v;
          col = j;
        }
      }
      if (col == n_) continue;
      const Eigen::VectorXd alpha = binv_ * a_.col(static_cast<Eigen::Index>(col));
      pivot(r, col, alpha, xb_(static_cast<Eigen::Index>(r)) / alpha(static_cast<Eigen::Index>(r)));
    }
    refactor();
  }

  std::size_t m_, n_;
  double tol_;
  std::size_t cap_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  std::vector<std::size_t> basis_;
  std::vector<bool> basic_;
};

}  // namespace

LpSolution solve_lp(const StandardFormLp& lp, const SimplexOptions& options) {
  if (lp.b.empty()) {
    LpSolution out;
    for (double c : lp.c) {
      if (c < 0.0) {
        out.status = LpStatus::Unbounded;
        return out;
      }
    }
    out.status = LpStatus::Optimal;
    out.x.assign(lp.c.size(), 0.0);
    return out;
  }
  RevisedSimplex solver(lp, options);
  return solver.run(lp.c);
}

}  // namespace deltachain
