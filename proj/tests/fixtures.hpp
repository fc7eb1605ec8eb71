#pragma once

// Planted problem instances shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "bsecg/dictionary.hpp"
#include "bsecg/rng.hpp"
#include "bsecg/sensing.hpp"
#include "bsecg/solvers.hpp"

namespace fixture {

using namespace bsecg;

inline Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

struct PlantedGroups {
  Matrix b;  // m x M, unit columns
  Matrix y;  // m x S
  Matrix code;
  GroupPartition partition;
  std::set<Index> groups;
};

// N = M = 128 orthonormal-basis signals, 16 groups of 8 atoms, two active
// groups with independent per-signal coefficients, m = N/2 Gaussian
// measurements, no noise.
inline PlantedGroups planted_groups(std::uint64_t seed, Index signals = 4) {
  const Index n = 128, group = 8, m = n / 2;
  Rng rng(seed);
  const auto partition = GroupPartition::contiguous(n, n / group);
  std::set<Index> active;
  while (active.size() < 2) {
    active.insert(static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n / group)));
  }
  Matrix code = Matrix::Zero(n, signals);
  for (Index g : active) {
    for (Index r = g * group; r < (g + 1) * group; ++r) {
      for (Index s = 0; s < signals; ++s) {
        const double mag = 0.5 + rng.uniform();
        code(r, s) = rng.uniform() < 0.5 ? -mag : mag;
      }
    }
  }
  Matrix b = normalize_columns(random_gaussian(m, n, rng));
  PlantedGroups out{b, b * code, code, partition, active};
  return out;
}

struct GroupRecovery {
  std::set<Index> groups;
  double off_group_energy = 0.0;  // fraction of total
};

inline GroupRecovery group_recovery(const Matrix& code, const GroupPartition& partition,
                                    const std::set<Index>& planted, double rel_tol = 1e-3) {
  GroupRecovery out;
  double total = code.squaredNorm(), off = 0.0, peak = 0.0;
  std::vector<double> norms;
  for (const auto& [lo, hi] : partition.ranges()) {
    norms.push_back(code.middleRows(lo, hi - lo).norm());
    peak = std::max(peak, norms.back());
  }
  for (std::size_t g = 0; g < norms.size(); ++g) {
    const auto [lo, hi] = partition.ranges()[g];
    if (norms[g] > rel_tol * peak) out.groups.insert(static_cast<Index>(g));
    if (!planted.count(static_cast<Index>(g))) off += code.middleRows(lo, hi - lo).squaredNorm();
  }
  out.off_group_energy = total > 0.0 ? off / total : 0.0;
  return out;
}

inline SolveResult solve_planted(const PlantedGroups& p) {
  SolverConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_iter = 5000;
  cfg.continuation = true;
  const double scale = (p.b.transpose() * p.y).cwiseAbs().maxCoeff();
  return chilasso(p.b, p.y, p.partition, 1e-4 * scale, 1e-2 * scale, cfg);
}

}  // namespace fixture
