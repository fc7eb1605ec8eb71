#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bsecg/bundle.hpp"
#include "bsecg/dictionary.hpp"
#include "bsecg/sensing.hpp"
#include "bsecg/signal.hpp"
#include "bsecg/solvers.hpp"

namespace bsecg {

struct PipelineConfig {
  // Dictionary
  KernelKind kernel = KernelKind::RaisedCosine;
  std::uint32_t n_shifts = 100;
  std::uint32_t n_scales = 30;
  double scale_lo = 0.02;  // s
  double scale_hi = 0.6;   // s
  bool normalize_atoms = true;

  // Beat alignment
  Index beat_length = 800;  // N
  double before_r = 0.2;    // s, P-R span covered by the shift window
  double after_r = 0.45;    // s, R-T span

  // Sensing: exactly one of m / cr
  std::optional<Index> m;
  std::optional<double> cr = 10.0;
  std::uint64_t seed = 1;
  bool identity_sensing = false;
  PayloadType payload = PayloadType::F64;

  // Reconstruction
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  double lambda_factor = 0.003;
  double group_weight = 0.1;  // lambda2 = group_weight * lambda1 * sqrt(mean group size)
  Index groups = 100;
  SolverConfig solver = default_solver();

  // Sparse coding of X itself, reported per lead at compression time
  bool coding_report = true;
  double coding_lambda_factor = 0.01;
  int coding_max_iter = 3000;

  double fs = 1000.0;
  int workers = 1;

  static SolverConfig default_solver() {
    SolverConfig s;
    s.continuation = true;
    return s;
  }

  void validate() const;
  Index measurements() const;
  DictionaryParams dictionary_for(Index r_index) const;
};

/// Splits a record into aligned beats of exactly `beat_length` rows. A record
/// that already has `beat_length` rows is used as a single beat; longer
/// records are cut at every detected R peak whose window fits.
std::vector<BeatWindow> segment_beats(const MultiLeadSignal& signal,
                                      const PipelineConfig& config);

struct CodingReport {
  std::vector<double> sparsity_percent;  // per lead
  int iterations = 0;
};

struct BeatCompression {
  CompressedBundle bundle;
  std::optional<CodingReport> coding;
};

/// Penalty weights used when the config leaves them unset:
/// lambda1 = lambda_factor * ||B^T Y||_inf on lead-normalized Y.
std::pair<double, double> default_lambdas(const Matrix& design,
                                          const Matrix& normalized_y,
                                          const GroupPartition& partition,
                                          const PipelineConfig& config);

/// Y scaled to unit-norm columns; the scales are returned for undoing it.
Matrix normalize_leads(const Matrix& y, Vector& scales);

BeatCompression compress_beat(const BeatWindow& beat, double fs,
                              const std::vector<std::string>& lead_names,
                              const PipelineConfig& config,
                              std::uint64_t beat_index);

std::vector<BeatCompression> compress_signal(const MultiLeadSignal& signal,
                                             const PipelineConfig& config);

SensingMatrix sensing_for(const CompressedBundle& bundle);

/// C-HiLasso on (A Phi, Y), returning Phi * C_hat with the original lead
/// names; `code` receives C_hat when non-null.
MultiLeadSignal decompress_bundle(const CompressedBundle& bundle,
                                  const SolverConfig& solver = PipelineConfig::default_solver(),
                                  Matrix* code = nullptr);

/// Decodes every record and stacks the beats in order.
MultiLeadSignal decompress_bundles(const std::vector<CompressedBundle>& bundles,
                                   const SolverConfig& solver, int workers);

// Reconstruction methods used by the benchmark.
enum class Recovery { CHiLasso, Lasso, Omp, Somp };

struct Method {
  Recovery recovery = Recovery::CHiLasso;
  KernelKind kernel = KernelKind::RaisedCosine;
  std::string name() const;
};

/// "chilasso-RC", "lasso-HS", "somp-G", ...
std::optional<Method> parse_method(std::string_view name);
std::vector<Method> default_methods();

struct GreedyConfig {
  double k_fraction = 0.5;  // k_max = k_fraction * m
  double rel_tol = 1e-2;    // stop when ||r|| <= rel_tol * ||y||
};

/// Recovers X from Y = A X using `method` over `dictionary`.
Matrix reconstruct(const Method& method, const Dictionary& dictionary,
                   const SensingMatrix& a, const Matrix& y,
                   const PipelineConfig& config,
                   const GreedyConfig& greedy = {});

struct BenchRow {
  std::string subject;
  double cr = 0.0;
  Index m = 0;
  std::string method;
  double reconstruction_error = 0.0;
  double prd = 0.0;
  double wdd = 0.0;
  double wall_seconds = 0.0;
};

struct BenchOptions {
  std::vector<double> crs{4, 6, 8, 10};
  std::vector<Method> methods = default_methods();
  PipelineConfig pipeline;
  GreedyConfig greedy;
};

/// One row per (subject, CR, method), subjects in file-name order.
std::vector<BenchRow> run_bench(const std::vector<std::pair<std::string, MultiLeadSignal>>& subjects,
                                const BenchOptions& options);

/// Loads every *.csv under `directory` (sorted), runs the benchmark and
/// writes report.csv, timings.csv and plot_<method>.csv into `out_dir`.
std::vector<BenchRow> bench_directory(const std::string& directory,
                                      const std::string& out_dir,
                                      const BenchOptions& options);

std::string format_report(const std::vector<BenchRow>& rows);
std::string format_timings(const std::vector<BenchRow>& rows);

/// JSON synthetic-beat spec (see README for the schema).
SyntheticBeatSpec parse_synth_spec(std::string_view json_text);
SyntheticBeatSpec default_synth_spec(Index leads = 12, std::uint64_t seed = 1,
                                     double noise_std = 0.0);

}  // namespace bsecg
