#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "bsecg/types.hpp"

namespace bsecg {

/// Disjoint, sorted, half-open row ranges covering [0, M).
class GroupPartition {
 public:
  using Range = std::pair<Index, Index>;

  explicit GroupPartition(std::vector<Range> ranges);

  /// `count` contiguous ranges whose sizes differ by at most one.
  static GroupPartition contiguous(Index m, Index count);

  const std::vector<Range>& ranges() const { return ranges_; }
  Index size() const { return static_cast<Index>(ranges_.size()); }
  Index extent() const { return ranges_.empty() ? 0 : ranges_.back().second; }
  double mean_group_size() const;

  /// Group index containing row `i`.
  Index group_of(Index i) const;

 private:
  std::vector<Range> ranges_;
};

struct SolverConfig {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int max_iter = 2000;
  double tol = 1e-6;       // relative objective change
  bool stable_support = true;  // also require an unchanged zero pattern to stop
  double bb_min = 1e-8;
  double bb_max = 1e8;
  double sigma = 0.01;     // sufficient decrease
  int memory = 5;          // nonmonotone window
  bool continuation = false;
  double continuation_factor = 0.5;
  int continuation_stages = 4;
  bool record_trace = false;

  void validate() const;
};

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;
  double step = 0.0;       // alpha_t; the gradient step is 1/alpha_t
  double reference = 0.0;  // nonmonotone reference the step was tested against
};

struct SolveResult {
  Matrix code;  // M x S
  int iterations = 0;
  double objective = 0.0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

/// Separable regularizer: `value(X)` and the proximal map of `scale * value`.
struct Penalty {
  std::function<double(const Matrix&)> value;
  std::function<Matrix(const Matrix&, double scale)> prox;
};

Penalty l1_penalty(double lambda1);
Penalty hierarchical_penalty(const GroupPartition& partition, double lambda1,
                             double lambda2);

Vector soft_threshold(const Vector& v, double tau);
Matrix soft_threshold(const Matrix& v, double tau);

/// block * max(0, 1 - tau / ||block||_F).
Matrix group_shrink(const Matrix& block, double tau);

/// Exact prox of tau1 ||U||_1 + tau2 sum_G ||U^G||_F: soft threshold, then
/// shrink each group.
Matrix hierarchical_prox(const Matrix& v, const GroupPartition& partition,
                         double tau1, double tau2);

/// Minimizes 1/2 ||Y - B X||_F^2 + penalty(X) by SpaRSA: prox-gradient
/// steps with Barzilai-Borwein step lengths, nonmonotone backtracking and
/// optional continuation on the penalty weight.
SolveResult sparsa_solve(const Matrix& b, const Matrix& y,
                         const Penalty& penalty, const SolverConfig& config,
                         const Matrix* warm_start = nullptr);

/// 1/2 ||y - B c||^2 + lambda1 ||c||_1.
Vector lasso(const Matrix& b, const Vector& y, double lambda1,
             const SolverConfig& config);

/// Collaborative hierarchical lasso:
/// 1/2 ||Y - B X||_F^2 + lambda2 sum_G ||X^G||_F + lambda1 sum_j ||x_j||_1.
SolveResult chilasso(const Matrix& b, const Matrix& y,
                     const GroupPartition& partition, double lambda1,
                     double lambda2, const SolverConfig& config);

struct GreedyResult {
  Matrix code;                      // M x S
  std::vector<Index> support;       // selection order
  std::vector<double> residual_norms;  // Frobenius norm after each step
};

/// Orthogonal matching pursuit. Columns of B must have unit norm; stops at
/// `k_max` atoms or when the residual norm drops to `residual_tol`.
GreedyResult omp(const Matrix& b, const Vector& y, Index k_max,
                 double residual_tol);

/// Simultaneous OMP: one shared support scored by sum_s |<b_j, r_s>|, with a
/// per-signal least-squares refit.
GreedyResult somp(const Matrix& b, const Matrix& y, Index k_max,
                  double residual_tol);

}  // namespace bsecg
