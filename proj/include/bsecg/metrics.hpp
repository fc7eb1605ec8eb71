#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "bsecg/signal.hpp"
#include "bsecg/types.hpp"

namespace bsecg {

/// Entries with |c| > rel_tol * max|c| count as nonzero.
inline constexpr double kNonzeroRelTol = 1e-8;

Index count_nonzeros(const Vector& code, double rel_tol = kNonzeroRelTol);

/// (N - k) / N * 100 where k is the nonzero count of `code` and N the
/// original signal length.
double sparsity_percent(const Vector& code, Index n);
double sparsity_percent_from_count(Index k, Index n);

/// N / m.
double compression_ratio(Index n, Index m);

/// (1/S) sum over leads of the summed squared error (no 1/N factor).
double reconstruction_error(const Matrix& x, const Matrix& x_hat);

/// ||X - X_hat|| / ||X - mean(X)|| * 100 over all entries, mean being the
/// scalar grand mean.
double prd(const Matrix& x, const Matrix& x_hat);

struct DiagnosticFeatures {
  double qrs_dur = 0.0;  // s
  double p_dur = 0.0;    // s
  double qrs_amp = 0.0;  // mV
  double p_amp = 0.0;    // mV
  double t_amp = 0.0;    // mV
  int qrs_sign = 1;

  std::array<double, 6> as_array() const {
    return {qrs_dur, p_dur, qrs_amp, p_amp, t_amp,
            static_cast<double>(qrs_sign)};
  }
};

/// Search windows relative to R, in seconds.
struct FeatureConfig {
  double qrs_half_window = 0.060;
  double p_begin = 0.200;  // P searched in [r - p_begin, r - p_end]
  double p_end = 0.060;
  double t_begin = 0.080;  // T searched in [r + t_begin, r + t_end]
  double t_end = 0.450;
};

/// Fiducial features of one lead. Amplitudes are measured from the
/// isoelectric level, taken as the median of the window.
DiagnosticFeatures extract_features(const Vector& lead, Index r_index,
                                    double fs,
                                    const FeatureConfig& config = {});
std::vector<DiagnosticFeatures> extract_features(
    const BeatWindow& beat, double fs, const FeatureConfig& config = {});

/// Diagonal weights, in the feature order of DiagnosticFeatures.
struct WeightMatrix {
  std::array<double, 6> diagonal{1, 1, 1, 1, 1, 1};
  double trace() const;
};

/// |a - b| / max(|a|, |b|); 0 when both are zero.
double feature_distance(double a, double b);

/// Weighted diagnostic distortion in percent.
double wdd(const DiagnosticFeatures& beta, const DiagnosticFeatures& beta_hat,
           const WeightMatrix& weights = {});

/// Mean WDD over leads, features taken at the same R index in both.
double wdd(const Matrix& x, const Matrix& x_hat, Index r_index, double fs,
           const WeightMatrix& weights = {}, const FeatureConfig& config = {});

/// Quality label for a WDD value.
std::string_view wdd_quality(double wdd_percent);

}  // namespace bsecg
