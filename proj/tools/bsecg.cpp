// Command-line front end over the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bsecg/bsecg.h"

namespace {

struct ConfigGuard {
  bsecg_config* ptr = nullptr;
  ~ConfigGuard() { bsecg_config_free(ptr); }
};

struct CompressArgs {
  std::string in, out;
  double cr = 0.0;
  uint32_t m = 0;
  std::string kernel = "rc";
  uint64_t seed = 1;
  double lambda1 = -1.0, lambda2 = -1.0;
  uint32_t groups = 100;
  double fs = 1000.0;
  uint32_t n = 800;
  bool f32 = false;
  bool identity = false;
  int workers = 1;
};

struct SolverArgs {
  int max_iter = 2000;
  double tol = 1e-6;
  bool no_continuation = false;
};

struct BenchArgs {
  std::string data, out, methods;
  std::vector<double> crs{4, 6, 8, 10};
  uint64_t seed = 1;
  uint32_t groups = 100;
  double fs = 1000.0;
  int workers = 1;
};

struct SynthArgs {
  std::string spec, out;
  uint64_t seed = 1;
  double noise_std = 0.0;
};

// Throws nothing; reports the failing call on stderr and yields its status.
int check(bsecg_status status) {
  if (status != BSECG_OK) {
    std::fprintf(stderr, "bsecg: %s: %s\n", bsecg_status_name(status), bsecg_last_error());
  }
  return static_cast<int>(status);
}

#define TRY(call)                          \
  do {                                     \
    if (int rc_ = check(call); rc_ != 0) { \
      return rc_;                          \
    }                                      \
  } while (0)

int apply_solver(bsecg_config* c, const SolverArgs& s) {
  TRY(bsecg_config_set_solver(c, s.max_iter, s.tol, s.no_continuation ? 0 : 1));
  return 0;
}

int run_compress(const CompressArgs& a, const SolverArgs& s) {
  ConfigGuard c;
  TRY(bsecg_config_new(&c.ptr));
  TRY(bsecg_config_set_kernel(c.ptr, a.kernel.c_str()));
  if (a.m > 0) {
    TRY(bsecg_config_set_m(c.ptr, a.m));
  } else if (a.cr > 0.0) {
    TRY(bsecg_config_set_cr(c.ptr, a.cr));
  }
  TRY(bsecg_config_set_seed(c.ptr, a.seed));
  TRY(bsecg_config_set_lambda1(c.ptr, a.lambda1));
  TRY(bsecg_config_set_lambda2(c.ptr, a.lambda2));
  TRY(bsecg_config_set_groups(c.ptr, a.groups));
  TRY(bsecg_config_set_fs(c.ptr, a.fs));
  TRY(bsecg_config_set_beat_length(c.ptr, a.n));
  TRY(bsecg_config_set_payload_f32(c.ptr, a.f32));
  TRY(bsecg_config_set_identity_sensing(c.ptr, a.identity));
  TRY(bsecg_config_set_workers(c.ptr, a.workers));
  if (int rc = apply_solver(c.ptr, s)) return rc;
  TRY(bsecg_config_validate(c.ptr));
  TRY(bsecg_compress_file(c.ptr, a.in.c_str(), a.out.c_str()));
  return 0;
}

int run_decompress(const std::string& in, const std::string& out, int workers,
                   const SolverArgs& s) {
  ConfigGuard c;
  TRY(bsecg_config_new(&c.ptr));
  TRY(bsecg_config_set_workers(c.ptr, workers));
  if (int rc = apply_solver(c.ptr, s)) return rc;
  TRY(bsecg_decompress_file(c.ptr, in.c_str(), out.c_str()));
  return 0;
}

int run_bench(const BenchArgs& a, const SolverArgs& s) {
  ConfigGuard c;
  TRY(bsecg_config_new(&c.ptr));
  TRY(bsecg_config_set_seed(c.ptr, a.seed));
  TRY(bsecg_config_set_groups(c.ptr, a.groups));
  TRY(bsecg_config_set_fs(c.ptr, a.fs));
  TRY(bsecg_config_set_workers(c.ptr, a.workers));
  TRY(bsecg_config_set_coding_report(c.ptr, 0));
  if (int rc = apply_solver(c.ptr, s)) return rc;
  TRY(bsecg_bench(c.ptr, a.data.c_str(), a.crs.data(), a.crs.size(), a.methods.c_str(),
                  a.out.c_str()));
  return 0;
}

int run_synth(const SynthArgs& a) {
  TRY(bsecg_synth(a.spec.empty() ? nullptr : a.spec.c_str(), a.seed, a.noise_std,
                  a.out.c_str()));
  return 0;
}

void add_solver_flags(CLI::App* cmd, SolverArgs& s) {
  cmd->add_option("--max-iter", s.max_iter, "SpaRSA iterations per continuation stage")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", s.tol, "relative objective change that stops the solver")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-continuation", s.no_continuation, "solve at the final lambda only");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-sparse compressed sensing of multi-lead ECG"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bsecg_version()));
  std::string log_level;
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off (default: $BSECG_LOG_LEVEL or warn)");

  SolverArgs solver;

  CompressArgs ca;
  auto* compress = app.add_subcommand("compress", "CSV beat(s) -> compressed bundle");
  compress->add_option("--in", ca.in, "input CSV (header of lead names, one row per sample)")
      ->required()
      ->check(CLI::ExistingFile);
  compress->add_option("--out", ca.out, "output bundle file")->required();
  auto* cr_opt = compress->add_option("--cr", ca.cr, "compression ratio N/m")
                     ->check(CLI::Range(1.0, 1e9));
  auto* m_opt = compress->add_option("--m", ca.m, "number of measurements")
                    ->check(CLI::PositiveNumber);
  cr_opt->excludes(m_opt);
  compress->add_option("--kernel", ca.kernel, "rc|g|hs|tg")
      ->check(CLI::IsMember({"rc", "g", "hs", "tg"}, CLI::ignore_case));
  compress->add_option("--seed", ca.seed, "sensing-matrix seed");
  compress->add_option("--lambda1", ca.lambda1, "l1 weight (default: data-driven)")
      ->check(CLI::NonNegativeNumber);
  compress->add_option("--lambda2", ca.lambda2, "group weight (default: data-driven)")
      ->check(CLI::NonNegativeNumber);
  compress->add_option("--groups", ca.groups, "number of atom groups")
      ->check(CLI::PositiveNumber);
  compress->add_option("--fs", ca.fs, "sampling rate in Hz")->check(CLI::PositiveNumber);
  compress->add_option("--n", ca.n, "beat length N in samples")->check(CLI::PositiveNumber);
  compress->add_flag("--f32", ca.f32, "store Y as float32");
  compress->add_flag("--identity", ca.identity, "debug: A = I (requires m = N)");
  compress->add_option("--workers", ca.workers, "parallel beats")->check(CLI::PositiveNumber);
  add_solver_flags(compress, solver);

  std::string din, dout;
  int dworkers = 1;
  auto* decompress = app.add_subcommand("decompress", "bundle -> reconstructed CSV");
  decompress->add_option("--in", din, "bundle file")->required()->check(CLI::ExistingFile);
  decompress->add_option("--out", dout, "output CSV")->required();
  decompress->add_option("--workers", dworkers, "parallel beats")->check(CLI::PositiveNumber);
  add_solver_flags(decompress, solver);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "method comparison over a directory of CSVs");
  bench->add_option("--data", ba.data, "directory of subject CSVs")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench->add_option("--crs", ba.crs, "compression ratios")->delimiter(',');
  bench->add_option("--methods", ba.methods,
                    "comma-separated <chilasso|lasso|omp|somp>-<RC|G|HS|TG>");
  bench->add_option("--out", ba.out, "output directory")->required();
  bench->add_option("--seed", ba.seed, "sensing-matrix seed");
  bench->add_option("--groups", ba.groups, "number of atom groups")
      ->check(CLI::PositiveNumber);
  bench->add_option("--fs", ba.fs, "sampling rate in Hz")->check(CLI::PositiveNumber);
  bench->add_option("--workers", ba.workers, "parallel jobs")->check(CLI::PositiveNumber);
  add_solver_flags(bench, solver);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "write a synthetic multi-lead beat CSV");
  synth->add_option("--spec", sa.spec, "JSON spec (default: built-in 12-lead beat)")
      ->check(CLI::ExistingFile);
  synth->add_option("--out", sa.out, "output CSV")->required();
  synth->add_option("--seed", sa.seed, "seed for the built-in beat");
  synth->add_option("--noise-std", sa.noise_std, "noise std in mV for the built-in beat")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (!log_level.empty()) TRY(bsecg_set_log_level(log_level.c_str()));

  if (*compress) {
    if (ca.cr == 0.0 && ca.m == 0) ca.cr = 10.0;
    return run_compress(ca, solver);
  }
  if (*decompress) return run_decompress(din, dout, dworkers, solver);
  if (*bench) return run_bench(ba, solver);
  return run_synth(sa);
}
