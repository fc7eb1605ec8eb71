#pragma once

// Independent reference computations used as test oracles. Nothing here
// calls into the library under test.

#include <cmath>
#include <vector>

#include "bsecg/types.hpp"

namespace oracle {

using bsecg::Index;
using bsecg::Matrix;
using bsecg::Vector;

inline Matrix naive_multiply(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

inline double brute_coherence(const Matrix& unit) {
  double best = 0.0;
  for (Index i = 0; i < unit.cols(); ++i) {
    for (Index j = i + 1; j < unit.cols(); ++j) {
      double dot = 0.0;
      for (Index r = 0; r < unit.rows(); ++r) dot += unit(r, i) * unit(r, j);
      best = std::max(best, std::abs(dot));
    }
  }
  return best;
}

// Objective of the hierarchical prox on one group:
// 1/2 ||U - V||^2 + t1 ||U||_1 + t2 ||U||_F.
inline double prox_objective(const Matrix& u, const Matrix& v, double t1, double t2) {
  return 0.5 * (u - v).squaredNorm() + t1 * u.cwiseAbs().sum() + t2 * u.norm();
}

// Minimizes the single-group prox objective through its dual,
//   min_{|A|_inf <= t1, ||B||_F <= t2} 1/2 ||V - A - B||^2,  U = V - A - B,
// by alternating exact minimization over the two constraint blocks. The
// ball block is updated first so the closed form is not reproduced in one
// step.
inline Matrix numeric_prox(const Matrix& v, double t1, double t2, int sweeps = 20000) {
  Matrix a = Matrix::Zero(v.rows(), v.cols());
  Matrix b = Matrix::Zero(v.rows(), v.cols());
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    Matrix target = v - a;
    const double n = target.norm();
    b = n <= t2 ? target : Matrix(target * (t2 / n));
    target = v - b;
    a = target.cwiseMax(-t1).cwiseMin(t1);
  }
  return v - a - b;
}

// Lasso optimality: for c != 0, B^T(y - Bc) = lambda sign(c); otherwise
// |B^T(y - Bc)| <= lambda. Returns the largest violation relative to lambda.
inline double lasso_kkt_violation(const Matrix& b, const Vector& y, const Vector& c,
                                  double lambda) {
  const Vector g = b.transpose() * (y - b * c);
  double worst = 0.0;
  for (Index j = 0; j < c.size(); ++j) {
    if (c(j) != 0.0) {
      const double sgn = c(j) > 0 ? 1.0 : -1.0;
      worst = std::max(worst, std::abs(g(j) - lambda * sgn) / lambda);
    } else {
      worst = std::max(worst, std::abs(g(j)) / lambda - 1.0);
    }
  }
  return worst;
}

}  // namespace oracle
