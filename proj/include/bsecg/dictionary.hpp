#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bsecg/types.hpp"

namespace bsecg {

enum class KernelKind : std::uint8_t {
  RaisedCosine = 0,
  Gaussian = 1,
  HyperbolicSecant = 2,
  TruncatedGaussian = 3,
};

/// Short CLI names: rc, g, hs, tg (case-insensitive).
std::optional<KernelKind> parse_kernel(std::string_view name);
std::string_view kernel_name(KernelKind kind);

/// Kernel value at time `t` for shift `alpha` and scale `beta` (seconds).
///   RaisedCosine       1 + cos(pi (t-alpha)/beta) on |t-alpha| <= beta, else 0
///   Gaussian           exp(-(t-alpha)^2 / (2 beta^2))
///   HyperbolicSecant   sech((t-alpha)/beta)
///   TruncatedGaussian  Gaussian on |t-alpha| <= 3 beta, else 0
double kernel_value(KernelKind kind, double t, double alpha, double beta);

Vector kernel_atom(KernelKind kind, std::span<const double> t_grid,
                   double alpha, double beta);
Vector raised_cosine_atom(std::span<const double> t_grid, double alpha,
                          double beta);
Vector gaussian_atom(std::span<const double> t_grid, double alpha,
                     double beta);

/// Uniform time grid t(j) = j / fs, j = 0..n-1.
std::vector<double> time_grid(Index n, double fs);

/// Grid description sufficient to rebuild a dictionary bit-exactly.
/// Shifts are in samples, scales in seconds.
struct DictionaryParams {
  KernelKind kernel = KernelKind::RaisedCosine;
  std::uint32_t n_shifts = 100;
  std::uint32_t n_scales = 30;
  Index n_samples = 800;
  double fs = 1000.0;
  double shift_lo = 75.0;
  double shift_hi = 725.0;
  double scale_lo = 0.02;
  double scale_hi = 0.6;
  bool normalize = true;

  Index atom_count() const {
    return static_cast<Index>(n_shifts) * static_cast<Index>(n_scales);
  }

  /// Shift window [r - before_s*fs, r + after_s*fs] around an R peak.
  static DictionaryParams around_peak(KernelKind kernel, std::uint32_t n_shifts,
                                      std::uint32_t n_scales, Index n_samples,
                                      double fs, Index r_index,
                                      bool normalize = true,
                                      double before_s = 0.2,
                                      double after_s = 0.45);
};

struct Dictionary {
  Matrix atoms;                // N x M, shift-major column order
  KernelKind kernel = KernelKind::RaisedCosine;
  std::vector<double> shifts;  // per column, samples
  std::vector<double> scales;  // per column, seconds
  Vector column_norms;         // l2 norms before normalization
  bool normalized = false;
  DictionaryParams params;

  Index rows() const { return atoms.rows(); }
  Index cols() const { return atoms.cols(); }
};

/// Column j = shift j / n_scales, scale j % n_scales, so contiguous column
/// ranges cover contiguous stretches of time.
Dictionary build_dictionary(const DictionaryParams& params);

Dictionary build_dictionary(KernelKind kernel, std::uint32_t n_shifts,
                            std::uint32_t n_scales, Index n_samples, double fs,
                            Index r_index, bool normalize);

/// Max |<a_i, a_j>| over distinct columns. Columns must have unit norm.
double mutual_coherence(const Matrix& unit_columns);

/// Returns a copy with every column scaled to unit l2 norm; zero columns
/// are rejected.
Matrix normalize_columns(const Matrix& m, Vector* norms = nullptr);

}  // namespace bsecg
