#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bsecg/dictionary.hpp"
#include "bsecg/types.hpp"

namespace bsecg {

/// N x S samples in millivolts: rows are time, columns are leads.
struct MultiLeadSignal {
  Matrix samples;
  double fs = 1000.0;
  std::vector<std::string> lead_names;

  Index length() const { return samples.rows(); }
  Index leads() const { return samples.cols(); }

  /// Checks shape, finiteness and fs; fills missing lead names.
  static MultiLeadSignal make(Matrix samples, double fs,
                              std::vector<std::string> lead_names = {});
  void validate() const;
};

struct BeatWindow {
  Matrix samples;  // window length x S
  Index r_index = 0;
  Index source_r_index = 0;
};

struct SyntheticWave {
  double amplitude = 0.0;  // mV
  double center = 0.0;     // s
  double width = 0.0;      // s, the kernel scale
  KernelKind kernel = KernelKind::RaisedCosine;
};

struct SyntheticBeatSpec {
  std::vector<SyntheticWave> waves;
  double duration = 0.8;  // s
  double fs = 1000.0;
  std::vector<double> lead_scalings{1.0};
  /// Optional S x W per-lead, per-wave gain on top of lead_scalings, so
  /// leads can differ in shape rather than only in scale.
  std::optional<Matrix> wave_gains;
  std::vector<std::string> lead_names;
  double noise_std = 0.0;  // mV
  std::uint64_t seed = 0;

  Index sample_count() const;
  void validate() const;
};

/// Index of the largest |x - mean(x)|.
Index detect_r_peak(std::span<const double> lead, double fs);
Index detect_r_peak(const Vector& lead, double fs);

/// All R peaks in a multi-beat record: local maxima of the mean-removed
/// absolute signal above `threshold` times the global maximum, at least
/// `refractory_s` apart (largest first).
std::vector<Index> detect_r_peaks(const Vector& lead, double fs,
                                  double refractory_s = 0.3,
                                  double threshold = 0.5);

/// Per-sample root-sum-square of the mean-removed leads; a single trace for
/// peak detection that does not depend on any one lead's polarity.
Vector detection_trace(const MultiLeadSignal& signal);

BeatWindow extract_beat(const MultiLeadSignal& signal, Index r_index,
                        Index pre, Index post);

/// Mirror-pads (or errors if longer) a window to exactly `length` rows;
/// the extra rows are split evenly before and after.
BeatWindow pad_beat(const BeatWindow& beat, Index length);

MultiLeadSignal generate_synthetic_beat(const SyntheticBeatSpec& spec);

/// Adds per-lead white Gaussian noise with variance P_lead / 10^(snr/10).
MultiLeadSignal add_white_noise(const MultiLeadSignal& signal,
                                double target_snr_db, std::uint64_t seed);

/// 10 log10(sum |x|^2 / sum |x - x_hat|^2); +infinity when equal.
double snr_db(const Matrix& reference, const Matrix& test);
double snr_db(const MultiLeadSignal& reference, const MultiLeadSignal& test);

// CSV ingestion: header row of lead names, then one row per sample.
MultiLeadSignal read_csv(const std::string& path, double fs);
MultiLeadSignal parse_csv(std::string_view text, double fs);
std::string format_csv(const MultiLeadSignal& signal);
void write_csv(const std::string& path, const MultiLeadSignal& signal);

}  // namespace bsecg
