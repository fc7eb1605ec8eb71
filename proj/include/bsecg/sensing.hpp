#pragma once

#include <cstdint>

#include "bsecg/signal.hpp"
#include "bsecg/types.hpp"

namespace bsecg {

/// m x N projection. Entries are regenerated from (seed, m, N) and never
/// stored alongside compressed data.
struct SensingMatrix {
  Matrix entries;
  std::uint64_t seed = 0;

  Index m() const { return entries.rows(); }
  Index n() const { return entries.cols(); }
};

/// i.i.d. N(0, 1) entries drawn row by row, so the matrix for m rows is
/// the leading block of the matrix for any larger m with the same seed.
SensingMatrix gaussian_sensing_matrix(Index m, Index n, std::uint64_t seed);

/// Debug path: lossless m = N projection.
SensingMatrix identity_sensing_matrix(Index n);

/// Constant of the measurement bound m >= u k ln(N / k), as published
/// (rounded to two digits).
inline constexpr double kMeasurementConstant = 0.28;

/// ceil(u k ln(N / k)); zero when k == N.
Index min_measurements(Index k, Index n);

/// Y = A X.
Matrix compress(const Matrix& x, const SensingMatrix& a);
Matrix compress(const MultiLeadSignal& x, const SensingMatrix& a);

}  // namespace bsecg
