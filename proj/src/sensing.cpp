#include "bsecg/sensing.hpp"

#include <cmath>

#include "bsecg/error.hpp"
#include "bsecg/rng.hpp"

namespace bsecg {

SensingMatrix gaussian_sensing_matrix(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || m > n) {
    fail(ErrorCode::InvalidArgument, "sensing matrix needs 1 <= m <= N (m = " +
                                         std::to_string(m) + ", N = " +
                                         std::to_string(n) + ")");
  }
  SensingMatrix a;
  a.seed = seed;
  a.entries.resize(m, n);
  Rng rng(seed);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a.entries(i, j) = rng.normal();
  return a;
}

SensingMatrix identity_sensing_matrix(Index n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "N must be >= 1");
  SensingMatrix a;
  a.entries = Matrix::Identity(n, n);
  return a;
}

Index min_measurements(Index k, Index n) {
  if (k < 1 || k > n) {
    fail(ErrorCode::InvalidArgument, "sparsity k must lie in [1, N]");
  }
  if (k == n) return 0;
  const double bound = kMeasurementConstant * static_cast<double>(k) *
                       std::log(static_cast<double>(n) / static_cast<double>(k));
  return static_cast<Index>(std::ceil(bound));
}

Matrix compress(const Matrix& x, const SensingMatrix& a) {
  if (a.n() != x.rows()) {
    fail(ErrorCode::Dimension, "sensing matrix has " + std::to_string(a.n()) +
                                   " columns but signal has " +
                                   std::to_string(x.rows()) + " samples");
  }
  return a.entries * x;
}

Matrix compress(const MultiLeadSignal& x, const SensingMatrix& a) {
  return compress(x.samples, a);
}

}  // namespace bsecg
