#include "bsecg/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "bsecg/error.hpp"

namespace bsecg {

Index count_nonzeros(const Vector& code, double rel_tol) {
  if (code.size() == 0) return 0;
  const double peak = code.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0;
  return (code.array().abs() > rel_tol * peak).count();
}

double sparsity_percent_from_count(Index k, Index n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "signal length must be >= 1");
  return static_cast<double>(n - k) / static_cast<double>(n) * 100.0;
}

double sparsity_percent(const Vector& code, Index n) {
  return sparsity_percent_from_count(count_nonzeros(code), n);
}

double compression_ratio(Index n, Index m) {
  if (m < 1 || m > n) {
    fail(ErrorCode::InvalidArgument, "compression ratio needs 1 <= m <= N");
  }
  return static_cast<double>(n) / static_cast<double>(m);
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::Dimension, std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

double reconstruction_error(const Matrix& x, const Matrix& x_hat) {
  require_same_shape(x, x_hat, "reconstruction_error");
  if (x.cols() == 0) fail(ErrorCode::Dimension, "no leads");
  return (x_hat - x).squaredNorm() / static_cast<double>(x.cols());
}

double prd(const Matrix& x, const Matrix& x_hat) {
  require_same_shape(x, x_hat, "prd");
  const double denom = (x.array() - x.mean()).matrix().norm();
  if (!(denom > 0.0)) {
    fail(ErrorCode::InvalidArgument, "prd undefined for a constant reference");
  }
  return (x - x_hat).norm() / denom * 100.0;
}

namespace {

double median(Vector v) {
  const auto n = static_cast<std::size_t>(v.size());
  auto* first = v.data();
  std::nth_element(first, first + n / 2, first + n);
  double hi = first[n / 2];
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(first, first + n / 2);
  return 0.5 * (lo + hi);
}

Index argmax_abs(const Vector& x, Index lo, Index hi) {
  Index best = lo;
  for (Index i = lo; i <= hi; ++i) {
    if (std::abs(x(i)) > std::abs(x(best))) best = i;
  }
  return best;
}

// Width between the interpolated half-amplitude crossings around `peak`.
double half_amplitude_width(const Vector& x, Index peak) {
  const double level = 0.5 * std::abs(x(peak));
  if (level == 0.0) return 0.0;
  const double sign = x(peak) >= 0.0 ? 1.0 : -1.0;
  auto above = [&](Index i) { return sign * x(i) >= level; };

  double left = 0.0;
  Index i = peak;
  while (i > 0 && above(i - 1)) --i;
  if (i == 0) {
    left = 0.0;
  } else {
    const double a = sign * x(i - 1), b = sign * x(i);
    left = static_cast<double>(i - 1) + (level - a) / (b - a);
  }

  double right = static_cast<double>(x.size() - 1);
  Index j = peak;
  while (j + 1 < x.size() && above(j + 1)) ++j;
  if (j + 1 < x.size()) {
    const double a = sign * x(j), b = sign * x(j + 1);
    right = static_cast<double>(j) + (a - level) / (a - b);
  }
  return right - left;
}

}  // namespace

DiagnosticFeatures extract_features(const Vector& lead, Index r_index,
                                    double fs, const FeatureConfig& config) {
  const Index n = lead.size();
  if (r_index < 0 || r_index >= n) {
    fail(ErrorCode::OutOfRange, "R index outside the beat window");
  }
  auto samples = [fs](double seconds) {
    return static_cast<Index>(std::llround(seconds * fs));
  };
  const Index p_lo = r_index - samples(config.p_begin);
  const Index p_hi = r_index - samples(config.p_end);
  const Index t_lo = r_index + samples(config.t_begin);
  const Index t_hi = std::min(n - 1, r_index + samples(config.t_end));
  if (p_lo < 0 || p_hi < p_lo || t_lo >= n) {
    fail(ErrorCode::OutOfRange,
         "beat window too short for the P/T search regions around R");
  }

  const Vector x = (lead.array() - median(lead)).matrix();
  DiagnosticFeatures f;
  f.qrs_sign = x(r_index) >= 0.0 ? 1 : -1;
  f.qrs_amp = std::abs(x(r_index));

  const Index reach = samples(config.qrs_half_window);
  const double s = f.qrs_sign;
  Index onset = r_index;
  while (onset > std::max<Index>(0, r_index - reach) && s * x(onset - 1) > 0.0) --onset;
  if (onset > 0 && s * x(onset - 1) <= 0.0) --onset;
  Index offset = r_index;
  const Index right_limit = std::min(n - 1, r_index + reach);
  while (offset < right_limit && s * x(offset + 1) > 0.0) ++offset;
  if (offset + 1 < n && s * x(offset + 1) <= 0.0) ++offset;
  f.qrs_dur = static_cast<double>(offset - onset) / fs;

  const Index p_peak = argmax_abs(x, p_lo, p_hi);
  f.p_amp = std::abs(x(p_peak));
  f.p_dur = half_amplitude_width(x, p_peak) / fs;

  const Index t_peak = argmax_abs(x, t_lo, t_hi);
  f.t_amp = std::abs(x(t_peak));
  return f;
}

std::vector<DiagnosticFeatures> extract_features(const BeatWindow& beat,
                                                 double fs,
                                                 const FeatureConfig& config) {
  std::vector<DiagnosticFeatures> out;
  for (Index s = 0; s < beat.samples.cols(); ++s) {
    out.push_back(extract_features(beat.samples.col(s), beat.r_index, fs, config));
  }
  return out;
}

double WeightMatrix::trace() const {
  double t = 0.0;
  for (double w : diagonal) t += w;
  return t;
}

double feature_distance(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

double wdd(const DiagnosticFeatures& beta, const DiagnosticFeatures& beta_hat,
           const WeightMatrix& weights) {
  const double trace = weights.trace();
  if (!(trace > 0.0) ||
      std::any_of(weights.diagonal.begin(), weights.diagonal.end(),
                  [](double w) { return w < 0.0; })) {
    fail(ErrorCode::InvalidArgument, "WDD weights must be >= 0 with positive trace");
  }
  const auto a = beta.as_array();
  const auto b = beta_hat.as_array();
  double sum = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double d = feature_distance(a[i], b[i]);
    sum += weights.diagonal[i] * d * d;
  }
  const double sign_d = beta.qrs_sign == beta_hat.qrs_sign ? 0.0 : 1.0;
  sum += weights.diagonal[5] * sign_d * sign_d;
  return sum / trace * 100.0;
}

double wdd(const Matrix& x, const Matrix& x_hat, Index r_index, double fs,
           const WeightMatrix& weights, const FeatureConfig& config) {
  require_same_shape(x, x_hat, "wdd");
  double total = 0.0;
  for (Index s = 0; s < x.cols(); ++s) {
    total += wdd(extract_features(x.col(s), r_index, fs, config),
                 extract_features(x_hat.col(s), r_index, fs, config), weights);
  }
  return total / static_cast<double>(x.cols());
}

std::string_view wdd_quality(double wdd_percent) {
  return wdd_percent <= 10.0 ? "very good/good" : "below good";
}

}  // namespace bsecg
