#include "bsecg/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bsecg/error.hpp"
#include "bsecg/rng.hpp"

namespace bsecg {

MultiLeadSignal MultiLeadSignal::make(Matrix samples, double fs,
                                      std::vector<std::string> lead_names) {
  MultiLeadSignal s;
  s.samples = std::move(samples);
  s.fs = fs;
  s.lead_names = std::move(lead_names);
  if (s.lead_names.empty()) {
    for (Index j = 0; j < s.samples.cols(); ++j) {
      s.lead_names.push_back("lead" + std::to_string(j + 1));
    }
  }
  s.validate();
  return s;
}

void MultiLeadSignal::validate() const {
  if (samples.rows() < 1 || samples.cols() < 1) {
    fail(ErrorCode::Dimension, "signal must have N >= 1 samples and S >= 1 leads");
  }
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    fail(ErrorCode::InvalidArgument, "sampling rate must be positive");
  }
  if (!samples.allFinite()) {
    fail(ErrorCode::InvalidArgument, "signal contains non-finite samples");
  }
  if (static_cast<Index>(lead_names.size()) != samples.cols()) {
    fail(ErrorCode::Dimension, "lead name count does not match lead count");
  }
}

Index SyntheticBeatSpec::sample_count() const {
  return static_cast<Index>(std::llround(duration * fs));
}

void SyntheticBeatSpec::validate() const {
  if (!(fs > 0.0)) fail(ErrorCode::InvalidArgument, "fs must be positive");
  if (!(duration > 0.0) || sample_count() < 1) {
    fail(ErrorCode::InvalidArgument, "duration must cover at least one sample");
  }
  if (lead_scalings.empty()) {
    fail(ErrorCode::InvalidArgument, "at least one lead is required");
  }
  for (const auto& w : waves) {
    if (!(w.width > 0.0)) {
      fail(ErrorCode::InvalidArgument, "wave width must be positive");
    }
    if (w.center < 0.0 || w.center > duration) {
      fail(ErrorCode::InvalidArgument, "wave center outside [0, duration]");
    }
  }
  if (wave_gains &&
      (wave_gains->rows() != static_cast<Index>(lead_scalings.size()) ||
       wave_gains->cols() != static_cast<Index>(waves.size()))) {
    fail(ErrorCode::Dimension, "wave_gains must be leads x waves");
  }
  if (!lead_names.empty() && lead_names.size() != lead_scalings.size()) {
    fail(ErrorCode::Dimension, "lead_names must match lead_scalings");
  }
  if (noise_std < 0.0) fail(ErrorCode::InvalidArgument, "noise_std must be >= 0");
}

Index detect_r_peak(std::span<const double> lead, double fs) {
  if (lead.size() < 3) fail(ErrorCode::InvalidArgument, "need at least 3 samples");
  if (!(fs > 0.0)) fail(ErrorCode::InvalidArgument, "fs must be positive");
  double mean = 0.0;
  for (double v : lead) mean += v;
  mean /= static_cast<double>(lead.size());
  Index best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < lead.size(); ++i) {
    const double a = std::abs(lead[i] - mean);
    if (a > best_abs) {
      best_abs = a;
      best = static_cast<Index>(i);
    }
  }
  if (!(best_abs > 0.0)) fail(ErrorCode::Numeric, "no peak: signal is constant");
  return best;
}

Index detect_r_peak(const Vector& lead, double fs) {
  return detect_r_peak(std::span<const double>(lead.data(), lead.size()), fs);
}

std::vector<Index> detect_r_peaks(const Vector& lead, double fs,
                                  double refractory_s, double threshold) {
  const Index global = detect_r_peak(lead, fs);
  const Vector centered = (lead.array() - lead.mean()).abs().matrix();
  const double limit = threshold * centered(global);
  std::vector<Index> candidates;
  for (Index i = 0; i < centered.size(); ++i) {
    const double left = i > 0 ? centered(i - 1) : -1.0;
    const double right = i + 1 < centered.size() ? centered(i + 1) : -1.0;
    if (centered(i) >= limit && centered(i) >= left && centered(i) > right) {
      candidates.push_back(i);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](Index a, Index b) { return centered(a) > centered(b); });
  const auto gap = static_cast<Index>(std::llround(refractory_s * fs));
  std::vector<Index> peaks;
  for (Index c : candidates) {
    const bool clear = std::none_of(peaks.begin(), peaks.end(), [&](Index p) {
      return std::abs(p - c) < gap;
    });
    if (clear) peaks.push_back(c);
  }
  std::sort(peaks.begin(), peaks.end());
  return peaks;
}

Vector detection_trace(const MultiLeadSignal& signal) {
  const Matrix centered =
      signal.samples.rowwise() - signal.samples.colwise().mean();
  return centered.rowwise().norm();
}

BeatWindow extract_beat(const MultiLeadSignal& signal, Index r_index,
                        Index pre, Index post) {
  if (pre < 0 || post < 1) {
    fail(ErrorCode::InvalidArgument, "window extents must be positive");
  }
  if (r_index - pre < 0) {
    fail(ErrorCode::OutOfRange, "beat window starts before the record: index " +
                                    std::to_string(r_index - pre));
  }
  if (r_index + post > signal.length()) {
    fail(ErrorCode::OutOfRange, "beat window ends past the record: index " +
                                    std::to_string(r_index + post) +
                                    " > N = " + std::to_string(signal.length()));
  }
  BeatWindow beat;
  beat.samples = signal.samples.middleRows(r_index - pre, pre + post);
  beat.r_index = pre;
  beat.source_r_index = r_index;
  return beat;
}

BeatWindow pad_beat(const BeatWindow& beat, Index length) {
  const Index n = beat.samples.rows();
  if (n > length) {
    fail(ErrorCode::OutOfRange, "beat of " + std::to_string(n) +
                                    " samples exceeds target length " +
                                    std::to_string(length));
  }
  const Index extra = length - n;
  const Index before = extra / 2;
  const Index after = extra - before;
  if (before > n || after > n) {
    fail(ErrorCode::OutOfRange, "beat too short to mirror-pad to target length");
  }
  BeatWindow out;
  out.samples.resize(length, beat.samples.cols());
  // Half-sample symmetric: the edge sample is repeated once.
  for (Index i = 0; i < before; ++i) {
    out.samples.row(i) = beat.samples.row(before - 1 - i);
  }
  out.samples.middleRows(before, n) = beat.samples;
  for (Index i = 0; i < after; ++i) {
    out.samples.row(before + n + i) = beat.samples.row(n - 1 - i);
  }
  out.r_index = beat.r_index + before;
  out.source_r_index = beat.source_r_index;
  return out;
}

MultiLeadSignal generate_synthetic_beat(const SyntheticBeatSpec& spec) {
  spec.validate();
  const Index n = spec.sample_count();
  const auto leads = static_cast<Index>(spec.lead_scalings.size());
  const auto n_waves = static_cast<Index>(spec.waves.size());
  const std::vector<double> t = time_grid(n, spec.fs);

  Matrix waves = Matrix::Zero(n, n_waves);
  for (Index w = 0; w < n_waves; ++w) {
    const auto& wave = spec.waves[static_cast<std::size_t>(w)];
    waves.col(w) = wave.amplitude *
                   kernel_atom(wave.kernel, t, wave.center, wave.width);
  }

  Matrix samples(n, leads);
  Rng rng(spec.seed);
  for (Index s = 0; s < leads; ++s) {
    Vector gains = Vector::Ones(n_waves);
    if (spec.wave_gains) gains = spec.wave_gains->row(s).transpose();
    samples.col(s) = spec.lead_scalings[static_cast<std::size_t>(s)] *
                     (waves * gains);
    if (spec.noise_std > 0.0) {
      for (Index i = 0; i < n; ++i) samples(i, s) += spec.noise_std * rng.normal();
    }
  }
  return MultiLeadSignal::make(std::move(samples), spec.fs, spec.lead_names);
}

MultiLeadSignal add_white_noise(const MultiLeadSignal& signal,
                                double target_snr_db, std::uint64_t seed) {
  const double total = signal.samples.squaredNorm();
  if (!(total > 0.0)) {
    fail(ErrorCode::InvalidArgument, "cannot calibrate noise on a zero-power signal");
  }
  MultiLeadSignal out = signal;
  Rng rng(seed);
  const double ratio = std::pow(10.0, target_snr_db / 10.0);
  for (Index s = 0; s < signal.leads(); ++s) {
    const double power =
        signal.samples.col(s).squaredNorm() / static_cast<double>(signal.length());
    const double sd = std::sqrt(power / ratio);
    for (Index i = 0; i < signal.length(); ++i) out.samples(i, s) += sd * rng.normal();
  }
  return out;
}

double snr_db(const Matrix& reference, const Matrix& test) {
  if (reference.rows() != test.rows() || reference.cols() != test.cols()) {
    fail(ErrorCode::Dimension, "snr: dimension mismatch");
  }
  const double err = (reference - test).squaredNorm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(reference.squaredNorm() / err);
}

double snr_db(const MultiLeadSignal& reference, const MultiLeadSignal& test) {
  return snr_db(reference.samples, test.samples);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
      field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                              field.back() == '\r'))
      field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

MultiLeadSignal parse_csv(std::string_view text, double fs) {
  std::vector<std::string> names;
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  Index rows = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (names.empty()) {
      for (auto f : fields) names.emplace_back(f);
      continue;
    }
    if (fields.size() != names.size()) {
      fail(ErrorCode::Format, "csv line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(names.size()) + " fields, got " +
                                  std::to_string(fields.size()));
    }
    for (auto f : fields) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
        fail(ErrorCode::Format, "csv line " + std::to_string(line_no) +
                                    ": not a number: '" + std::string(f) + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (names.empty() || rows == 0) fail(ErrorCode::Format, "csv has no data rows");
  const auto cols = static_cast<Index>(names.size());
  Matrix samples(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      samples(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  return MultiLeadSignal::make(std::move(samples), fs, std::move(names));
}

MultiLeadSignal read_csv(const std::string& path, double fs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), fs);
}

std::string format_csv(const MultiLeadSignal& signal) {
  std::string out;
  for (std::size_t j = 0; j < signal.lead_names.size(); ++j) {
    if (j) out += ',';
    out += signal.lead_names[j];
  }
  out += '\n';
  char buf[64];
  for (Index i = 0; i < signal.length(); ++i) {
    for (Index j = 0; j < signal.leads(); ++j) {
      if (j) out += ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, signal.samples(i, j));
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const MultiLeadSignal& signal) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << format_csv(signal);
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

}  // namespace bsecg
