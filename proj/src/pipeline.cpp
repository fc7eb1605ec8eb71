#include "bsecg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include <fmt/format.h>
#include "json.hpp"
#include <spdlog/spdlog.h>

#include "bsecg/error.hpp"
#include "bsecg/metrics.hpp"
#include "bsecg/rng.hpp"

namespace bsecg {

namespace fs = std::filesystem;

namespace {

// Runs task(i) for i in [0, count) on up to `workers` threads. Each task
// writes only its own output slot, so results do not depend on scheduling.
// The exception of the lowest failing index is rethrown.
template <typename Task>
void parallel_for(std::size_t count, int workers, Task task) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Index round_index(double v) { return static_cast<Index>(std::lround(v)); }

}  // namespace

void PipelineConfig::validate() const {
  if (m.has_value() == cr.has_value()) {
    fail(ErrorCode::InvalidArgument, "specify exactly one of m and cr");
  }
  if (beat_length < 2) fail(ErrorCode::InvalidArgument, "beat length must be >= 2");
  if (n_shifts < 1 || n_scales < 1) {
    fail(ErrorCode::InvalidArgument, "dictionary grid sizes must be >= 1");
  }
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    fail(ErrorCode::InvalidArgument, "fs must be positive");
  }
  if (!(before_r > 0.0) || !(after_r > 0.0)) {
    fail(ErrorCode::InvalidArgument, "beat window extents must be positive");
  }
  const Index atoms = static_cast<Index>(n_shifts) * static_cast<Index>(n_scales);
  if (groups < 1 || groups > atoms) {
    fail(ErrorCode::InvalidArgument, "group count " + std::to_string(groups) +
                                         " must lie in [1, " +
                                         std::to_string(atoms) + "]");
  }
  if (lambda1 && !(*lambda1 >= 0.0)) fail(ErrorCode::InvalidArgument, "lambda1 must be >= 0");
  if (lambda2 && !(*lambda2 >= 0.0)) fail(ErrorCode::InvalidArgument, "lambda2 must be >= 0");
  if (!(lambda_factor > 0.0) || !(coding_lambda_factor > 0.0) || !(group_weight >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "lambda heuristics must be non-negative");
  }
  if (workers < 1) fail(ErrorCode::InvalidArgument, "workers must be >= 1");
  solver.validate();
  (void)measurements();
}

Index PipelineConfig::measurements() const {
  Index value = 0;
  if (m) {
    value = *m;
  } else if (cr) {
    if (!(*cr >= 1.0) || !std::isfinite(*cr)) {
      fail(ErrorCode::InvalidArgument, "compression ratio must be >= 1");
    }
    value = std::max<Index>(1, round_index(static_cast<double>(beat_length) / *cr));
  }
  if (value < 1 || value > beat_length) {
    fail(ErrorCode::InvalidArgument, "m = " + std::to_string(value) +
                                         " must lie in [1, N = " +
                                         std::to_string(beat_length) + "]");
  }
  if (identity_sensing && value != beat_length) {
    fail(ErrorCode::InvalidArgument, "identity sensing requires m = N");
  }
  return value;
}

DictionaryParams PipelineConfig::dictionary_for(Index r_index) const {
  DictionaryParams p = DictionaryParams::around_peak(
      kernel, n_shifts, n_scales, beat_length, fs, r_index, normalize_atoms,
      before_r, after_r);
  p.shift_lo = std::max(p.shift_lo, 0.0);
  p.shift_hi = std::min(p.shift_hi, static_cast<double>(beat_length - 1));
  if (p.shift_hi < p.shift_lo) p.shift_hi = p.shift_lo;
  p.scale_lo = scale_lo;
  p.scale_hi = scale_hi;
  return p;
}

std::vector<BeatWindow> segment_beats(const MultiLeadSignal& signal,
                                      const PipelineConfig& config) {
  signal.validate();
  const Index n = config.beat_length;
  const Vector trace = detection_trace(signal);
  if (signal.length() == n) {
    BeatWindow beat;
    beat.samples = signal.samples;
    beat.r_index = detect_r_peak(trace, signal.fs);
    beat.source_r_index = beat.r_index;
    return {beat};
  }

  const Index pre = round_index(config.before_r * signal.fs);
  const Index post = round_index(config.after_r * signal.fs);
  if (pre + post > n) {
    fail(ErrorCode::InvalidArgument, "beat window of " + std::to_string(pre + post) +
                                         " samples exceeds N = " + std::to_string(n));
  }
  if (signal.length() < n) {
    return {pad_beat(extract_beat(signal, detect_r_peak(trace, signal.fs), pre, post), n)};
  }

  std::vector<Index> peaks = detect_r_peaks(trace, signal.fs);
  std::sort(peaks.begin(), peaks.end());
  std::vector<BeatWindow> beats;
  for (Index r : peaks) {
    if (r - pre < 0 || r + post > signal.length()) {
      spdlog::debug("skipping R peak at {}: window does not fit", r);
      continue;
    }
    beats.push_back(pad_beat(extract_beat(signal, r, pre, post), n));
  }
  if (beats.empty()) {
    fail(ErrorCode::OutOfRange, "no R peak has a complete beat window in the record");
  }
  return beats;
}

Matrix normalize_leads(const Matrix& y, Vector& scales) {
  scales = y.colwise().norm().transpose();
  Matrix out = y;
  for (Index s = 0; s < y.cols(); ++s) {
    if (scales(s) > 0.0) {
      out.col(s) /= scales(s);
    } else {
      scales(s) = 1.0;
    }
  }
  return out;
}

std::pair<double, double> default_lambdas(const Matrix& design,
                                          const Matrix& normalized_y,
                                          const GroupPartition& partition,
                                          const PipelineConfig& config) {
  double l1 = 0.0;
  if (config.lambda1) {
    l1 = *config.lambda1;
  } else {
    const Matrix corr = design.transpose() * normalized_y;
    l1 = config.lambda_factor * (corr.size() ? corr.cwiseAbs().maxCoeff() : 0.0);
  }
  const double l2 = config.lambda2
                        ? *config.lambda2
                        : config.group_weight * l1 * std::sqrt(partition.mean_group_size());
  return {l1, l2};
}

namespace {

SensingMatrix make_sensing(SensingKind kind, Index m, Index n, std::uint64_t seed) {
  if (kind == SensingKind::Identity) {
    if (m != n) fail(ErrorCode::Format, "identity sensing requires m = N");
    return identity_sensing_matrix(n);
  }
  return gaussian_sensing_matrix(m, n, seed);
}

// C-HiLasso on lead-normalized targets; the code is returned at the
// original lead scale.
Matrix solve_chilasso(const Matrix& design, const Matrix& y,
                      const GroupPartition& partition, double lambda1,
                      double lambda2, const SolverConfig& solver,
                      int* iterations = nullptr) {
  Vector scales;
  const Matrix yn = normalize_leads(y, scales);
  SolveResult res = chilasso(design, yn, partition, lambda1, lambda2, solver);
  if (!res.converged) {
    spdlog::debug("chilasso stopped at max_iter ({} iterations)", res.iterations);
  }
  if (iterations) *iterations = res.iterations;
  for (Index s = 0; s < y.cols(); ++s) res.code.col(s) *= scales(s);
  return res.code;
}

}  // namespace

BeatCompression compress_beat(const BeatWindow& beat, double fs,
                              const std::vector<std::string>& lead_names,
                              const PipelineConfig& config,
                              std::uint64_t beat_index) {
  PipelineConfig cfg = config;
  cfg.fs = fs;
  cfg.validate();
  if (beat.samples.rows() != cfg.beat_length) {
    fail(ErrorCode::Dimension, "beat has " + std::to_string(beat.samples.rows()) +
                                   " rows, expected " + std::to_string(cfg.beat_length));
  }
  const Index m = cfg.measurements();
  const std::uint64_t seed = cfg.seed ^ beat_index;

  BeatCompression out;
  CompressedBundle& b = out.bundle;
  b.dictionary = cfg.dictionary_for(beat.r_index);
  b.m = static_cast<std::uint32_t>(m);
  b.seed = seed;
  b.groups = static_cast<std::uint32_t>(cfg.groups);
  b.payload = cfg.payload;
  b.sensing = cfg.identity_sensing ? SensingKind::Identity : SensingKind::Gaussian;
  b.lead_names = lead_names;

  const Dictionary dict = build_dictionary(b.dictionary);
  const SensingMatrix a = make_sensing(b.sensing, m, cfg.beat_length, seed);
  b.y = compress(beat.samples, a);
  if (b.payload == PayloadType::F32) {
    b.y = b.y.cast<float>().cast<double>();
  }

  const auto partition = GroupPartition::contiguous(dict.cols(), cfg.groups);
  const Matrix design = a.entries * dict.atoms;
  Vector scales;
  const Matrix yn = normalize_leads(b.y, scales);
  std::tie(b.lambda1, b.lambda2) = default_lambdas(design, yn, partition, cfg);

  if (cfg.coding_report) {
    PipelineConfig coding_cfg = cfg;
    coding_cfg.lambda_factor = cfg.coding_lambda_factor;
    coding_cfg.lambda1.reset();
    coding_cfg.lambda2.reset();
    SolverConfig solver = cfg.solver;
    solver.max_iter = std::min(solver.max_iter, cfg.coding_max_iter);
    solver.continuation = false;
    const Matrix xn = normalize_leads(beat.samples, scales);
    const auto [l1, l2] = default_lambdas(dict.atoms, xn, partition, coding_cfg);
    CodingReport report;
    const Matrix code = solve_chilasso(dict.atoms, beat.samples, partition, l1, l2,
                                       solver, &report.iterations);
    for (Index s = 0; s < code.cols(); ++s) {
      report.sparsity_percent.push_back(sparsity_percent(code.col(s), cfg.beat_length));
      spdlog::info("beat {} lead {}: sparsity {:.2f}%", beat_index,
                   s < static_cast<Index>(lead_names.size()) ? lead_names[s] : "?",
                   report.sparsity_percent.back());
    }
    out.coding = std::move(report);
  }
  const double value_bytes = b.payload == PayloadType::F32 ? 4.0 : 8.0;
  spdlog::info("beat {}: m = {}, CR = {:.3g} (dimension), {:.3g} (bytes vs f64 input)",
               beat_index, m, compression_ratio(cfg.beat_length, m),
               static_cast<double>(cfg.beat_length) * 8.0 /
                   (static_cast<double>(m) * value_bytes));
  b.validate();
  return out;
}

std::vector<BeatCompression> compress_signal(const MultiLeadSignal& signal,
                                             const PipelineConfig& config) {
  PipelineConfig cfg = config;
  cfg.fs = signal.fs;
  cfg.validate();
  const std::vector<BeatWindow> beats = segment_beats(signal, cfg);
  spdlog::info("{} beat(s) of {} samples, {} leads", beats.size(), cfg.beat_length,
               signal.leads());
  std::vector<BeatCompression> out(beats.size());
  parallel_for(beats.size(), cfg.workers, [&](std::size_t i) {
    out[i] = compress_beat(beats[i], signal.fs, signal.lead_names, cfg, i);
  });
  return out;
}

SensingMatrix sensing_for(const CompressedBundle& bundle) {
  return make_sensing(bundle.sensing, bundle.m, bundle.n(), bundle.seed);
}

MultiLeadSignal decompress_bundle(const CompressedBundle& bundle,
                                  const SolverConfig& solver, Matrix* code) {
  bundle.validate();
  const Dictionary dict = build_dictionary(bundle.dictionary);
  const SensingMatrix a = sensing_for(bundle);
  const auto partition = GroupPartition::contiguous(dict.cols(), bundle.groups);
  const Matrix design = a.entries * dict.atoms;
  Matrix c = solve_chilasso(design, bundle.y, partition, bundle.lambda1,
                            bundle.lambda2, solver);
  MultiLeadSignal out = MultiLeadSignal::make(dict.atoms * c, bundle.dictionary.fs,
                                              bundle.lead_names);
  if (code) *code = std::move(c);
  return out;
}

MultiLeadSignal decompress_bundles(const std::vector<CompressedBundle>& bundles,
                                   const SolverConfig& solver, int workers) {
  if (bundles.empty()) fail(ErrorCode::InvalidArgument, "no bundles to decode");
  std::vector<MultiLeadSignal> parts(bundles.size());
  parallel_for(bundles.size(), workers, [&](std::size_t i) {
    parts[i] = decompress_bundle(bundles[i], solver);
  });
  Index rows = 0;
  for (const auto& p : parts) {
    if (p.leads() != parts.front().leads() || p.fs != parts.front().fs) {
      fail(ErrorCode::Format, "bundle records disagree on lead count or fs");
    }
    rows += p.length();
  }
  Matrix stacked(rows, parts.front().leads());
  Index at = 0;
  for (const auto& p : parts) {
    stacked.middleRows(at, p.length()) = p.samples;
    at += p.length();
  }
  return MultiLeadSignal::make(std::move(stacked), parts.front().fs,
                               parts.front().lead_names);
}

// ---------------------------------------------------------------- methods

std::string Method::name() const {
  static constexpr const char* kNames[] = {"chilasso", "lasso", "omp", "somp"};
  return fmt::format("{}-{}", kNames[static_cast<int>(recovery)], kernel_name(kernel));
}

std::optional<Method> parse_method(std::string_view name) {
  const auto dash = name.rfind('-');
  if (dash == std::string_view::npos) return std::nullopt;
  std::string head(name.substr(0, dash));
  std::transform(head.begin(), head.end(), head.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  static const std::map<std::string, Recovery> kRecoveries{
      {"chilasso", Recovery::CHiLasso},
      {"lasso", Recovery::Lasso},
      {"omp", Recovery::Omp},
      {"somp", Recovery::Somp}};
  const auto it = kRecoveries.find(head);
  const auto kernel = parse_kernel(name.substr(dash + 1));
  if (it == kRecoveries.end() || !kernel) return std::nullopt;
  return Method{it->second, *kernel};
}

std::vector<Method> default_methods() {
  return {{Recovery::CHiLasso, KernelKind::RaisedCosine},
          {Recovery::Lasso, KernelKind::RaisedCosine},
          {Recovery::Omp, KernelKind::RaisedCosine},
          {Recovery::CHiLasso, KernelKind::HyperbolicSecant},
          {Recovery::CHiLasso, KernelKind::TruncatedGaussian},
          {Recovery::Somp, KernelKind::RaisedCosine}};
}

Matrix reconstruct(const Method& method, const Dictionary& dictionary,
                   const SensingMatrix& a, const Matrix& y,
                   const PipelineConfig& config, const GreedyConfig& greedy) {
  if (y.rows() != a.m()) fail(ErrorCode::Dimension, "Y rows must equal m");
  const Matrix design = a.entries * dictionary.atoms;
  const auto partition = GroupPartition::contiguous(dictionary.cols(), config.groups);
  Matrix code = Matrix::Zero(dictionary.cols(), y.cols());

  switch (method.recovery) {
    case Recovery::CHiLasso: {
      Vector scales;
      const auto [l1, l2] =
          default_lambdas(design, normalize_leads(y, scales), partition, config);
      code = solve_chilasso(design, y, partition, l1, l2, config.solver);
      break;
    }
    case Recovery::Lasso: {
      PipelineConfig per_lead = config;
      per_lead.lambda2 = 0.0;
      for (Index s = 0; s < y.cols(); ++s) {
        Vector scales;
        const Matrix yn = normalize_leads(y.col(s), scales);
        const double l1 = default_lambdas(design, yn, partition, per_lead).first;
        code.col(s) = scales(0) * lasso(design, yn.col(0), l1, config.solver);
      }
      break;
    }
    case Recovery::Omp:
    case Recovery::Somp: {
      Vector norms;
      const Matrix unit = normalize_columns(design, &norms);
      const Index k_max =
          std::max<Index>(1, static_cast<Index>(greedy.k_fraction * static_cast<double>(a.m())));
      if (method.recovery == Recovery::Omp) {
        for (Index s = 0; s < y.cols(); ++s) {
          const Vector col = y.col(s);
          code.col(s) = omp(unit, col, k_max, greedy.rel_tol * col.norm()).code.col(0);
        }
      } else {
        code = somp(unit, y, k_max, greedy.rel_tol * y.norm()).code;
      }
      for (Index j = 0; j < code.rows(); ++j) {
        if (norms(j) > 0.0) code.row(j) /= norms(j);
      }
      break;
    }
  }
  return dictionary.atoms * code;
}

// ------------------------------------------------------------------ bench

namespace {

struct BenchUnit {
  std::size_t subject = 0;
  std::size_t beat = 0;
  std::size_t cr = 0;
  std::size_t method = 0;
};

struct UnitResult {
  Matrix x_hat;
  double wdd = 0.0;
  double seconds = 0.0;
};

}  // namespace

std::vector<BenchRow> run_bench(
    const std::vector<std::pair<std::string, MultiLeadSignal>>& subjects,
    const BenchOptions& options) {
  if (subjects.empty()) fail(ErrorCode::InvalidArgument, "empty dataset");
  if (options.crs.empty() || options.methods.empty()) {
    fail(ErrorCode::InvalidArgument, "bench needs at least one CR and one method");
  }
  std::vector<std::vector<BeatWindow>> beats;
  for (const auto& [name, signal] : subjects) {
    PipelineConfig cfg = options.pipeline;
    cfg.fs = signal.fs;
    beats.push_back(segment_beats(signal, cfg));
  }

  std::vector<BenchUnit> units;
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    for (std::size_t b = 0; b < beats[s].size(); ++b) {
      for (std::size_t c = 0; c < options.crs.size(); ++c) {
        for (std::size_t k = 0; k < options.methods.size(); ++k) {
          units.push_back({s, b, c, k});
        }
      }
    }
  }

  std::vector<UnitResult> results(units.size());
  parallel_for(units.size(), options.pipeline.workers, [&](std::size_t i) {
    const BenchUnit& u = units[i];
    const auto start = std::chrono::steady_clock::now();
    const BeatWindow& beat = beats[u.subject][u.beat];
    PipelineConfig cfg = options.pipeline;
    cfg.fs = subjects[u.subject].second.fs;
    cfg.m.reset();
    cfg.cr = options.crs[u.cr];
    cfg.kernel = options.methods[u.method].kernel;
    cfg.validate();
    const Dictionary dict = build_dictionary(cfg.dictionary_for(beat.r_index));
    const SensingMatrix a = cfg.identity_sensing
                                ? identity_sensing_matrix(cfg.beat_length)
                                : gaussian_sensing_matrix(cfg.measurements(), cfg.beat_length,
                                                          cfg.seed ^ u.beat);
    const Matrix y = compress(beat.samples, a);
    results[i].x_hat = reconstruct(options.methods[u.method], dict, a, y, cfg, options.greedy);
    results[i].wdd = wdd(beat.samples, results[i].x_hat, beat.r_index, cfg.fs);
    results[i].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    spdlog::debug("{} beat {} CR {} {}: {:.2f}s", subjects[u.subject].first, u.beat,
                  options.crs[u.cr], options.methods[u.method].name(), results[i].seconds);
  });

  // Beats of one (subject, CR, method) are pooled: errors over the stacked
  // beats, WDD averaged per beat.
  std::vector<BenchRow> rows;
  std::size_t i = 0;
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    const std::size_t per_beat = options.crs.size() * options.methods.size();
    const std::size_t n_beats = beats[s].size();
    const Index n = options.pipeline.beat_length;
    const Index leads = subjects[s].second.leads();
    for (std::size_t c = 0; c < options.crs.size(); ++c) {
      for (std::size_t k = 0; k < options.methods.size(); ++k) {
        Matrix x(n * static_cast<Index>(n_beats), leads);
        Matrix x_hat(x.rows(), leads);
        BenchRow row;
        row.subject = subjects[s].first;
        row.cr = options.crs[c];
        row.method = options.methods[k].name();
        for (std::size_t b = 0; b < n_beats; ++b) {
          const UnitResult& r = results[i + b * per_beat + c * options.methods.size() + k];
          x.middleRows(static_cast<Index>(b) * n, n) = beats[s][b].samples;
          x_hat.middleRows(static_cast<Index>(b) * n, n) = r.x_hat;
          row.wdd += r.wdd / static_cast<double>(n_beats);
          row.wall_seconds += r.seconds;
        }
        PipelineConfig cfg = options.pipeline;
        cfg.m.reset();
        cfg.cr = row.cr;
        row.m = cfg.measurements();
        row.reconstruction_error = reconstruction_error(x, x_hat) / static_cast<double>(n_beats);
        row.prd = prd(x, x_hat);
        rows.push_back(std::move(row));
      }
    }
    i += n_beats * options.crs.size() * options.methods.size();
  }
  return rows;
}

std::string format_report(const std::vector<BenchRow>& rows) {
  std::string out = "subject,cr,m,method,reconstruction_error,prd,wdd\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.subject, r.cr, r.m, r.method,
                       r.reconstruction_error, r.prd, r.wdd);
  }
  return out;
}

std::string format_timings(const std::vector<BenchRow>& rows) {
  std::string out = "subject,cr,method,wall_seconds\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{:.6f}\n", r.subject, r.cr, r.method, r.wall_seconds);
  }
  return out;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f.flush()) fail(ErrorCode::Io, "write to " + path.string() + " failed");
}

}  // namespace

std::vector<BenchRow> bench_directory(const std::string& directory,
                                      const std::string& out_dir,
                                      const BenchOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    fail(ErrorCode::Io, "dataset directory not found: " + directory);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorCode::InvalidArgument, "empty dataset: no *.csv in " + directory);

  std::vector<std::pair<std::string, MultiLeadSignal>> subjects;
  for (const auto& f : files) {
    subjects.emplace_back(f.stem().string(), read_csv(f.string(), options.pipeline.fs));
  }
  const std::vector<BenchRow> rows = run_bench(subjects, options);

  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + out_dir + ": " + ec.message());
  write_text(fs::path(out_dir) / "report.csv", format_report(rows));
  write_text(fs::path(out_dir) / "timings.csv", format_timings(rows));

  // Per-method (CR, metric) series averaged over subjects.
  for (const Method& method : options.methods) {
    std::string text = "cr,reconstruction_error,prd,wdd\n";
    for (double cr : options.crs) {
      double err = 0.0, p = 0.0, w = 0.0;
      int count = 0;
      for (const auto& r : rows) {
        if (r.method == method.name() && r.cr == cr) {
          err += r.reconstruction_error;
          p += r.prd;
          w += r.wdd;
          ++count;
        }
      }
      text += fmt::format("{},{},{},{}\n", cr, err / count, p / count, w / count);
    }
    write_text(fs::path(out_dir) / ("plot_" + method.name() + ".csv"), text);
  }
  return rows;
}

// ------------------------------------------------------------------ synth

SyntheticBeatSpec default_synth_spec(Index leads, std::uint64_t seed,
                                     double noise_std) {
  if (leads < 1) fail(ErrorCode::InvalidArgument, "lead count must be >= 1");
  static const std::vector<std::string> kStandard{
      "I", "II", "III", "aVR", "aVL", "aVF", "V1", "V2", "V3", "V4", "V5", "V6"};
  SyntheticBeatSpec spec;
  spec.duration = 0.8;
  spec.fs = 1000.0;
  spec.seed = seed;
  spec.noise_std = noise_std;
  // P, Q, R, S, T
  spec.waves = {{0.15, 0.115, 0.090, KernelKind::RaisedCosine},
                {-0.12, 0.250, 0.020, KernelKind::RaisedCosine},
                {1.10, 0.275, 0.028, KernelKind::RaisedCosine},
                {-0.25, 0.300, 0.022, KernelKind::RaisedCosine},
                {0.30, 0.530, 0.160, KernelKind::RaisedCosine}};
  // Lead-specific wave gains with a shared support, drawn from the seed.
  Rng rng(seed ^ 0x5eedULL);
  Matrix gains(leads, static_cast<Index>(spec.waves.size()));
  spec.lead_scalings.assign(static_cast<std::size_t>(leads), 1.0);
  for (Index s = 0; s < leads; ++s) {
    spec.lead_scalings[static_cast<std::size_t>(s)] = 0.5 + rng.uniform();
    for (Index w = 0; w < gains.cols(); ++w) gains(s, w) = 0.4 + 1.2 * rng.uniform();
    spec.lead_names.push_back(s < static_cast<Index>(kStandard.size())
                                  ? kStandard[static_cast<std::size_t>(s)]
                                  : "L" + std::to_string(s + 1));
  }
  spec.wave_gains = std::move(gains);
  return spec;
}

SyntheticBeatSpec parse_synth_spec(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Format, std::string("invalid synth spec: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::Format, "synth spec must be a JSON object");
  try {
    const Index leads = j.value("leads", Index{12});
    SyntheticBeatSpec spec =
        default_synth_spec(leads, j.value("seed", std::uint64_t{1}), j.value("noise_std", 0.0));
    spec.duration = j.value("duration", spec.duration);
    spec.fs = j.value("fs", spec.fs);
    if (j.contains("waves")) {
      spec.waves.clear();
      for (const auto& w : j.at("waves")) {
        SyntheticWave wave;
        wave.amplitude = w.at("amplitude").get<double>();
        wave.center = w.at("center").get<double>();
        wave.width = w.at("width").get<double>();
        const auto kernel = parse_kernel(w.value("kernel", std::string("rc")));
        if (!kernel) fail(ErrorCode::Format, "unknown kernel in synth spec");
        wave.kernel = *kernel;
        spec.waves.push_back(wave);
      }
    }
    if (j.contains("lead_scalings")) {
      spec.lead_scalings = j.at("lead_scalings").get<std::vector<double>>();
    }
    if (j.contains("lead_names")) {
      spec.lead_names = j.at("lead_names").get<std::vector<std::string>>();
    }
    const auto leads_now = static_cast<Index>(spec.lead_scalings.size());
    if (j.contains("wave_gains")) {
      const auto rows = j.at("wave_gains").get<std::vector<std::vector<double>>>();
      Matrix g(static_cast<Index>(rows.size()),
               rows.empty() ? 0 : static_cast<Index>(rows.front().size()));
      for (Index r = 0; r < g.rows(); ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (static_cast<Index>(row.size()) != g.cols()) {
          fail(ErrorCode::Format, "wave_gains rows must have equal length");
        }
        for (Index c = 0; c < g.cols(); ++c) g(r, c) = row[static_cast<std::size_t>(c)];
      }
      spec.wave_gains = std::move(g);
    } else if (spec.wave_gains &&
               (spec.wave_gains->rows() != leads_now ||
                spec.wave_gains->cols() != static_cast<Index>(spec.waves.size()))) {
      spec.wave_gains.reset();
    }
    if (!j.contains("lead_names") &&
        static_cast<Index>(spec.lead_names.size()) != leads_now) {
      spec.lead_names.clear();
      for (Index s = 0; s < leads_now; ++s) spec.lead_names.push_back("L" + std::to_string(s + 1));
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Format, std::string("invalid synth spec: ") + e.what());
  }
}

}  // namespace bsecg
