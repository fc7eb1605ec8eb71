#include "bsecg/dictionary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bsecg/error.hpp"

namespace bsecg {

std::optional<KernelKind> parse_kernel(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "rc" || lower == "raised-cosine") return KernelKind::RaisedCosine;
  if (lower == "g" || lower == "gaussian") return KernelKind::Gaussian;
  if (lower == "hs" || lower == "sech") return KernelKind::HyperbolicSecant;
  if (lower == "tg" || lower == "truncated-gaussian")
    return KernelKind::TruncatedGaussian;
  return std::nullopt;
}

std::string_view kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::RaisedCosine: return "RC";
    case KernelKind::Gaussian: return "G";
    case KernelKind::HyperbolicSecant: return "HS";
    case KernelKind::TruncatedGaussian: return "TG";
  }
  return "?";
}

double kernel_value(KernelKind kind, double t, double alpha, double beta) {
  if (!(beta > 0.0)) {
    fail(ErrorCode::InvalidArgument, "kernel scale must be positive");
  }
  const double u = (t - alpha) / beta;
  switch (kind) {
    case KernelKind::RaisedCosine:
      return std::abs(u) <= 1.0 ? 1.0 + std::cos(std::numbers::pi * u) : 0.0;
    case KernelKind::Gaussian:
      return std::exp(-0.5 * u * u);
    case KernelKind::HyperbolicSecant:
      return 1.0 / std::cosh(u);
    case KernelKind::TruncatedGaussian:
      return std::abs(u) <= 3.0 ? std::exp(-0.5 * u * u) : 0.0;
  }
  return 0.0;
}

Vector kernel_atom(KernelKind kind, std::span<const double> t_grid,
                   double alpha, double beta) {
  if (!(beta > 0.0)) {
    fail(ErrorCode::InvalidArgument, "kernel scale must be positive");
  }
  Vector atom(static_cast<Index>(t_grid.size()));
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    atom(static_cast<Index>(j)) = kernel_value(kind, t_grid[j], alpha, beta);
  }
  return atom;
}

Vector raised_cosine_atom(std::span<const double> t_grid, double alpha,
                          double beta) {
  return kernel_atom(KernelKind::RaisedCosine, t_grid, alpha, beta);
}

Vector gaussian_atom(std::span<const double> t_grid, double alpha,
                     double beta) {
  return kernel_atom(KernelKind::Gaussian, t_grid, alpha, beta);
}

std::vector<double> time_grid(Index n, double fs) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = j / fs;
  return t;
}

DictionaryParams DictionaryParams::around_peak(
    KernelKind kernel, std::uint32_t n_shifts, std::uint32_t n_scales,
    Index n_samples, double fs, Index r_index, bool normalize,
    double before_s, double after_s) {
  DictionaryParams p;
  p.kernel = kernel;
  p.n_shifts = n_shifts;
  p.n_scales = n_scales;
  p.n_samples = n_samples;
  p.fs = fs;
  p.shift_lo = static_cast<double>(r_index) - std::round(before_s * fs);
  p.shift_hi = static_cast<double>(r_index) + std::round(after_s * fs);
  p.normalize = normalize;
  return p;
}

namespace {

double linspace_at(double lo, double hi, std::uint32_t count, std::uint32_t i) {
  if (count == 1) return 0.5 * (lo + hi);
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void validate(const DictionaryParams& p) {
  if (p.n_shifts == 0 || p.n_scales == 0) {
    fail(ErrorCode::InvalidArgument, "dictionary grid must be non-empty");
  }
  if (p.n_samples < 1) fail(ErrorCode::InvalidArgument, "N must be >= 1");
  if (!(p.fs > 0.0)) fail(ErrorCode::InvalidArgument, "fs must be positive");
  if (!(p.scale_lo > 0.0) || p.scale_hi < p.scale_lo) {
    fail(ErrorCode::InvalidArgument, "scale interval must be positive and ordered");
  }
  if (p.shift_hi < p.shift_lo) {
    fail(ErrorCode::InvalidArgument, "shift window is reversed");
  }
  if (p.shift_lo < 0.0 || p.shift_hi > static_cast<double>(p.n_samples - 1)) {
    std::ostringstream msg;
    msg << "shift window [" << p.shift_lo << ", " << p.shift_hi
        << "] does not fit N = " << p.n_samples;
    fail(ErrorCode::OutOfRange, msg.str());
  }
}

}  // namespace

Dictionary build_dictionary(const DictionaryParams& params) {
  validate(params);
  const Index n = params.n_samples;
  const Index m = params.atom_count();
  const std::vector<double> t = time_grid(n, params.fs);

  Dictionary dict;
  dict.kernel = params.kernel;
  dict.params = params;
  dict.atoms.resize(n, m);
  dict.shifts.resize(static_cast<std::size_t>(m));
  dict.scales.resize(static_cast<std::size_t>(m));
  dict.column_norms.resize(m);
  dict.normalized = params.normalize;

  Index col = 0;
  for (std::uint32_t i = 0; i < params.n_shifts; ++i) {
    const double shift =
        linspace_at(params.shift_lo, params.shift_hi, params.n_shifts, i);
    for (std::uint32_t j = 0; j < params.n_scales; ++j, ++col) {
      const double scale =
          linspace_at(params.scale_lo, params.scale_hi, params.n_scales, j);
      dict.atoms.col(col) =
          kernel_atom(params.kernel, t, shift / params.fs, scale);
      const double norm = dict.atoms.col(col).norm();
      if (!(norm > 0.0) || !std::isfinite(norm)) {
        std::ostringstream msg;
        msg << "atom (alpha=" << shift << " samples, beta=" << scale
            << " s) is identically zero on the grid";
        fail(ErrorCode::InvalidArgument, msg.str());
      }
      dict.shifts[static_cast<std::size_t>(col)] = shift;
      dict.scales[static_cast<std::size_t>(col)] = scale;
      dict.column_norms(col) = norm;
      if (params.normalize) dict.atoms.col(col) /= norm;
    }
  }
  return dict;
}

Dictionary build_dictionary(KernelKind kernel, std::uint32_t n_shifts,
                            std::uint32_t n_scales, Index n_samples, double fs,
                            Index r_index, bool normalize) {
  return build_dictionary(DictionaryParams::around_peak(
      kernel, n_shifts, n_scales, n_samples, fs, r_index, normalize));
}

Matrix normalize_columns(const Matrix& m, Vector* norms) {
  Matrix out = m;
  Vector n = m.colwise().norm().transpose();
  for (Index j = 0; j < m.cols(); ++j) {
    if (!(n(j) > 0.0)) {
      fail(ErrorCode::InvalidArgument,
           "cannot normalize zero column " + std::to_string(j));
    }
    out.col(j) /= n(j);
  }
  if (norms) *norms = std::move(n);
  return out;
}

double mutual_coherence(const Matrix& a) {
  if (a.cols() < 2) {
    fail(ErrorCode::InvalidArgument, "coherence needs at least two columns");
  }
  for (Index j = 0; j < a.cols(); ++j) {
    if (std::abs(a.col(j).norm() - 1.0) > 1e-9) {
      fail(ErrorCode::InvalidArgument,
           "coherence requires unit-norm columns (column " +
               std::to_string(j) + ")");
    }
  }
  // Upper triangle of the Gram matrix, a block of columns at a time.
  constexpr Index kBlock = 256;
  double best = 0.0;
  for (Index start = 0; start < a.cols(); start += kBlock) {
    const Index width = std::min(kBlock, a.cols() - start);
    const Matrix gram = a.leftCols(start + width).transpose() *
                        a.middleCols(start, width);
    for (Index c = 0; c < width; ++c) {
      const Index j = start + c;
      for (Index i = 0; i < j; ++i) {
        best = std::max(best, std::abs(gram(i, c)));
      }
    }
  }
  return best;
}

}  // namespace bsecg
