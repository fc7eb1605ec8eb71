#include "bsecg/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "bsecg/error.hpp"

namespace bsecg {

GroupPartition::GroupPartition(std::vector<Range> ranges)
    : ranges_(std::move(ranges)) {
  if (ranges_.empty()) fail(ErrorCode::InvalidArgument, "partition has no groups");
  Index expected = 0;
  for (const auto& [lo, hi] : ranges_) {
    if (lo != expected || hi <= lo) {
      fail(ErrorCode::InvalidArgument,
           "partition ranges must be non-empty, sorted and contiguous from 0");
    }
    expected = hi;
  }
}

GroupPartition GroupPartition::contiguous(Index m, Index count) {
  if (count < 1 || count > m) {
    fail(ErrorCode::InvalidArgument, "group count " + std::to_string(count) +
                                         " must lie in [1, " + std::to_string(m) +
                                         "]");
  }
  std::vector<Range> ranges;
  const Index base = m / count;
  const Index extra = m % count;
  Index lo = 0;
  for (Index g = 0; g < count; ++g) {
    const Index hi = lo + base + (g < extra ? 1 : 0);
    ranges.emplace_back(lo, hi);
    lo = hi;
  }
  return GroupPartition(std::move(ranges));
}

double GroupPartition::mean_group_size() const {
  return static_cast<double>(extent()) / static_cast<double>(size());
}

Index GroupPartition::group_of(Index i) const {
  const auto it = std::upper_bound(
      ranges_.begin(), ranges_.end(), i,
      [](Index v, const Range& r) { return v < r.second; });
  if (it == ranges_.end() || i < it->first) {
    fail(ErrorCode::OutOfRange, "row outside partition");
  }
  return static_cast<Index>(it - ranges_.begin());
}

void SolverConfig::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "lambda values must be >= 0");
  }
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be > 0");
  if (!(bb_min > 0.0) || bb_max < bb_min) {
    fail(ErrorCode::InvalidArgument, "need 0 < bb_min <= bb_max");
  }
  if (!(sigma > 0.0 && sigma < 1.0)) {
    fail(ErrorCode::InvalidArgument, "sigma must lie in (0, 1)");
  }
  if (max_iter < 1 || memory < 1) {
    fail(ErrorCode::InvalidArgument, "max_iter and memory must be >= 1");
  }
  if (continuation &&
      (continuation_stages < 1 ||
       !(continuation_factor > 0.0 && continuation_factor < 1.0))) {
    fail(ErrorCode::InvalidArgument, "continuation needs stages >= 1, factor in (0,1)");
  }
}

Vector soft_threshold(const Vector& v, double tau) {
  return (v.array().sign() * (v.array().abs() - tau).max(0.0)).matrix();
}

Matrix soft_threshold(const Matrix& v, double tau) {
  return (v.array().sign() * (v.array().abs() - tau).max(0.0)).matrix();
}

Matrix group_shrink(const Matrix& block, double tau) {
  const double norm = block.norm();
  if (norm <= tau || norm == 0.0) return Matrix::Zero(block.rows(), block.cols());
  return block * (1.0 - tau / norm);
}

Matrix hierarchical_prox(const Matrix& v, const GroupPartition& partition,
                         double tau1, double tau2) {
  if (partition.extent() != v.rows()) {
    fail(ErrorCode::Dimension, "partition covers " +
                                   std::to_string(partition.extent()) +
                                   " rows, matrix has " + std::to_string(v.rows()));
  }
  Matrix u = soft_threshold(v, tau1);
  if (tau2 > 0.0) {
    for (const auto& [lo, hi] : partition.ranges()) {
      auto block = u.middleRows(lo, hi - lo);
      const double norm = block.norm();
      if (norm <= tau2) {
        block.setZero();
      } else {
        block *= 1.0 - tau2 / norm;
      }
    }
  }
  return u;
}

Penalty l1_penalty(double lambda1) {
  return Penalty{
      [lambda1](const Matrix& x) { return lambda1 * x.cwiseAbs().sum(); },
      [lambda1](const Matrix& v, double scale) {
        return soft_threshold(v, lambda1 * scale);
      }};
}

Penalty hierarchical_penalty(const GroupPartition& partition, double lambda1,
                             double lambda2) {
  return Penalty{
      [partition, lambda1, lambda2](const Matrix& x) {
        double groups = 0.0;
        for (const auto& [lo, hi] : partition.ranges()) {
          groups += x.middleRows(lo, hi - lo).norm();
        }
        return lambda1 * x.cwiseAbs().sum() + lambda2 * groups;
      },
      [partition, lambda1, lambda2](const Matrix& v, double scale) {
        return hierarchical_prox(v, partition, lambda1 * scale, lambda2 * scale);
      }};
}

namespace {

// B * X touching only the rows of X that are not identically zero.
Matrix sparse_product(const Matrix& b, const Matrix& x) {
  std::vector<Index> active;
  active.reserve(static_cast<std::size_t>(x.rows()));
  for (Index i = 0; i < x.rows(); ++i) {
    if (!x.row(i).isZero(0.0)) active.push_back(i);
  }
  if (active.empty()) return Matrix::Zero(b.rows(), x.cols());
  if (2 * static_cast<Index>(active.size()) > x.rows()) return b * x;
  return b(Eigen::all, active) * x(active, Eigen::all);
}

void check_finite(double value) {
  if (!std::isfinite(value)) {
    fail(ErrorCode::Numeric, "solver diverged: objective is not finite");
  }
}

struct StageOutcome {
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
};

StageOutcome run_stage(const Matrix& b, const Matrix& y, const Penalty& penalty,
                       double scale, const SolverConfig& cfg, Matrix& x,
                       int iteration_offset, std::vector<TracePoint>* trace) {
  Matrix bx = sparse_product(b, x);
  Matrix residual = bx - y;
  Matrix grad = b.transpose() * residual;
  double objective = 0.5 * residual.squaredNorm() + scale * penalty.value(x);
  check_finite(objective);

  std::deque<double> history{objective};
  double alpha = 1.0;
  if (const double g2 = grad.squaredNorm(); g2 > 0.0) {
    alpha = std::clamp((b * grad).squaredNorm() / g2, cfg.bb_min, cfg.bb_max);
  }

  StageOutcome out;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const double reference = *std::max_element(history.begin(), history.end());
    Matrix u, bu, ru;
    double candidate = 0.0;
    double step_sq = 0.0;
    for (int tries = 0;; ++tries) {
      u = penalty.prox(x - grad / alpha, scale / alpha);
      bu = sparse_product(b, u);
      ru = bu - y;
      candidate = 0.5 * ru.squaredNorm() + scale * penalty.value(u);
      check_finite(candidate);
      step_sq = (u - x).squaredNorm();
      if (candidate <= reference - 0.5 * cfg.sigma * alpha * step_sq) break;
      if (tries >= 200) {
        fail(ErrorCode::Numeric, "solver line search failed to find descent");
      }
      alpha *= 2.0;
    }

    if (trace) {
      trace->push_back({iteration_offset + it, candidate, alpha, reference});
    }
    const double change = std::abs(objective - candidate);
    const double denom = std::max(std::abs(objective), std::numeric_limits<double>::min());
    const double bs_sq = (bu - bx).squaredNorm();
    const bool same_support =
        !cfg.stable_support || ((u.array() != 0.0) == (x.array() != 0.0)).all();

    x = std::move(u);
    bx = std::move(bu);
    residual = std::move(ru);
    objective = candidate;
    out.iterations = it;
    out.objective = objective;

    history.push_back(objective);
    if (static_cast<int>(history.size()) > cfg.memory) history.pop_front();

    if (step_sq == 0.0 || objective == 0.0 || (same_support && change / denom < cfg.tol)) {
      out.converged = true;
      break;
    }
    grad = b.transpose() * residual;
    alpha = std::clamp(bs_sq / step_sq, cfg.bb_min, cfg.bb_max);
  }
  if (out.iterations == 0) out.objective = objective;
  return out;
}

}  // namespace

SolveResult sparsa_solve(const Matrix& b, const Matrix& y,
                         const Penalty& penalty, const SolverConfig& config,
                         const Matrix* warm_start) {
  config.validate();
  if (b.rows() != y.rows()) {
    fail(ErrorCode::Dimension, "design matrix and targets disagree on rows");
  }
  if (!b.allFinite() || !y.allFinite()) {
    fail(ErrorCode::InvalidArgument, "solver inputs must be finite");
  }
  SolveResult result;
  result.code = Matrix::Zero(b.cols(), y.cols());
  if (warm_start) {
    if (warm_start->rows() != b.cols() || warm_start->cols() != y.cols()) {
      fail(ErrorCode::Dimension, "warm start has the wrong shape");
    }
    result.code = *warm_start;
  }

  std::vector<double> scales{1.0};
  if (config.continuation && config.continuation_stages > 1) {
    scales.clear();
    for (int k = config.continuation_stages - 1; k >= 0; --k) {
      scales.push_back(std::pow(config.continuation_factor, -k));
    }
  }
  auto* trace = config.record_trace ? &result.trace : nullptr;
  for (double scale : scales) {
    const StageOutcome stage = run_stage(b, y, penalty, scale, config,
                                         result.code, result.iterations, trace);
    result.iterations += stage.iterations;
    result.objective = stage.objective;
    result.converged = stage.converged;
  }
  return result;
}

Vector lasso(const Matrix& b, const Vector& y, double lambda1,
             const SolverConfig& config) {
  SolverConfig cfg = config;
  cfg.lambda1 = lambda1;
  cfg.lambda2 = 0.0;
  const Matrix target = y;
  return sparsa_solve(b, target, l1_penalty(lambda1), cfg).code.col(0);
}

SolveResult chilasso(const Matrix& b, const Matrix& y,
                     const GroupPartition& partition, double lambda1,
                     double lambda2, const SolverConfig& config) {
  if (partition.extent() != b.cols()) {
    fail(ErrorCode::Dimension, "partition does not cover the dictionary columns");
  }
  if (y.cols() < 1) fail(ErrorCode::Dimension, "need at least one signal");
  SolverConfig cfg = config;
  cfg.lambda1 = lambda1;
  cfg.lambda2 = lambda2;
  return sparsa_solve(b, y, hierarchical_penalty(partition, lambda1, lambda2), cfg);
}

namespace {

void require_unit_columns(const Matrix& b) {
  for (Index j = 0; j < b.cols(); ++j) {
    if (std::abs(b.col(j).norm() - 1.0) > 1e-6) {
      fail(ErrorCode::InvalidArgument, "greedy pursuit requires unit-norm columns "
                                       "(column " + std::to_string(j) + ")");
    }
  }
}

GreedyResult pursue(const Matrix& b, const Matrix& y, Index k_max,
                    double residual_tol) {
  require_unit_columns(b);
  if (b.rows() != y.rows()) {
    fail(ErrorCode::Dimension, "design matrix and targets disagree on rows");
  }
  GreedyResult out;
  out.code = Matrix::Zero(b.cols(), y.cols());
  Matrix residual = y;
  double residual_norm = residual.norm();
  std::vector<char> taken(static_cast<std::size_t>(b.cols()), 0);
  Matrix coef;
  const Index limit = std::min({k_max, b.cols(), b.rows()});

  while (static_cast<Index>(out.support.size()) < limit &&
         residual_norm > residual_tol) {
    const Vector score = (b.transpose() * residual).cwiseAbs().rowwise().sum();
    Index best = -1;
    double best_score = 0.0;
    for (Index j = 0; j < score.size(); ++j) {
      if (!taken[static_cast<std::size_t>(j)] && score(j) > best_score) {
        best_score = score(j);
        best = j;
      }
    }
    if (best < 0 || best_score <= 1e-14 * residual_norm) break;

    out.support.push_back(best);
    const Matrix active = b(Eigen::all, out.support);
    Matrix trial = active.colPivHouseholderQr().solve(y);
    Matrix next = y - active * trial;
    const double next_norm = next.norm();
    if (!(next_norm < residual_norm)) {
      out.support.pop_back();
      break;
    }
    taken[static_cast<std::size_t>(best)] = 1;
    coef = std::move(trial);
    residual = std::move(next);
    residual_norm = next_norm;
    out.residual_norms.push_back(residual_norm);
  }
  for (std::size_t i = 0; i < out.support.size(); ++i) {
    out.code.row(out.support[i]) = coef.row(static_cast<Index>(i));
  }
  return out;
}

}  // namespace

GreedyResult omp(const Matrix& b, const Vector& y, Index k_max,
                 double residual_tol) {
  const Matrix target = y;
  return pursue(b, target, k_max, residual_tol);
}

GreedyResult somp(const Matrix& b, const Matrix& y, Index k_max,
                  double residual_tol) {
  return pursue(b, y, k_max, residual_tol);
}

}  // namespace bsecg
