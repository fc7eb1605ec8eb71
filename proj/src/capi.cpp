#include "bsecg/bsecg.h"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <new>
#include <sstream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bsecg/error.hpp"
#include "bsecg/pipeline.hpp"

struct bsecg_config {
  bsecg::PipelineConfig pipeline;
};

struct bsecg_signal {
  bsecg::MultiLeadSignal signal;
};

struct bsecg_bundle {
  std::vector<bsecg::CompressedBundle> records;
  std::vector<std::optional<bsecg::CodingReport>> coding;
};

namespace {

thread_local std::string last_error;

void init_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_color_mt("bsecg");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("BSECG_LOG_LEVEL"); env && *env) {
      spdlog::set_level(spdlog::level::from_str(env));
    }
  });
}

bsecg_status status_of(bsecg::ErrorCode code) {
  switch (code) {
    case bsecg::ErrorCode::InvalidArgument: return BSECG_E_INVALID_ARGUMENT;
    case bsecg::ErrorCode::Dimension: return BSECG_E_DIMENSION;
    case bsecg::ErrorCode::OutOfRange: return BSECG_E_OUT_OF_RANGE;
    case bsecg::ErrorCode::Io: return BSECG_E_IO;
    case bsecg::ErrorCode::Format: return BSECG_E_FORMAT;
    case bsecg::ErrorCode::Numeric: return BSECG_E_NUMERIC;
  }
  return BSECG_E_INTERNAL;
}

// Runs `body`, translating exceptions into status codes and the
// thread-local message.
template <typename Body>
bsecg_status guarded(Body&& body) {
  init_logging();
  try {
    body();
    last_error.clear();
    return BSECG_OK;
  } catch (const bsecg::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return BSECG_E_INTERNAL;
}

template <typename T>
void require(const T* p, const char* what) {
  if (!p) bsecg::fail(bsecg::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

bsecg::PipelineConfig config_or_default(const bsecg_config* c) {
  return c ? c->pipeline : bsecg::PipelineConfig{};
}

const bsecg::CompressedBundle& record_at(const bsecg_bundle* b, size_t record) {
  require(b, "bundle");
  if (record >= b->records.size()) {
    bsecg::fail(bsecg::ErrorCode::OutOfRange,
                "record " + std::to_string(record) + " of " +
                    std::to_string(b->records.size()));
  }
  return b->records[record];
}

std::vector<bsecg::Method> parse_methods(const char* text) {
  if (!text || !*text) return bsecg::default_methods();
  std::vector<bsecg::Method> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto m = bsecg::parse_method(item);
    if (!m) bsecg::fail(bsecg::ErrorCode::InvalidArgument, "unknown method '" + item + "'");
    out.push_back(*m);
  }
  if (out.empty()) bsecg::fail(bsecg::ErrorCode::InvalidArgument, "empty method list");
  return out;
}

}  // namespace

extern "C" {

const char* bsecg_last_error(void) { return last_error.c_str(); }

const char* bsecg_status_name(bsecg_status status) {
  switch (status) {
    case BSECG_OK: return "ok";
    case BSECG_E_INVALID_ARGUMENT: return "invalid argument";
    case BSECG_E_DIMENSION: return "dimension mismatch";
    case BSECG_E_OUT_OF_RANGE: return "out of range";
    case BSECG_E_IO: return "i/o error";
    case BSECG_E_FORMAT: return "format error";
    case BSECG_E_NUMERIC: return "numerical failure";
    case BSECG_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bsecg_version(void) { return "0.1.0"; }

bsecg_status bsecg_set_log_level(const char* level) {
  return guarded([&] {
    require(level, "level");
    const auto parsed = spdlog::level::from_str(level);
    if (parsed == spdlog::level::off && std::string(level) != "off") {
      bsecg::fail(bsecg::ErrorCode::InvalidArgument,
                  std::string("unknown log level '") + level + "'");
    }
    spdlog::set_level(parsed);
  });
}

// ---------------------------------------------------------------- config

bsecg_status bsecg_config_new(bsecg_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bsecg_config{};
  });
}

void bsecg_config_free(bsecg_config* config) { delete config; }

bsecg_status bsecg_config_set_kernel(bsecg_config* c, const char* kernel) {
  return guarded([&] {
    require(c, "config");
    require(kernel, "kernel");
    const auto k = bsecg::parse_kernel(kernel);
    if (!k) {
      bsecg::fail(bsecg::ErrorCode::InvalidArgument,
                  std::string("unknown kernel '") + kernel + "' (expected rc, g, hs, tg)");
    }
    c->pipeline.kernel = *k;
  });
}

bsecg_status bsecg_config_set_cr(bsecg_config* c, double cr) {
  return guarded([&] {
    require(c, "config");
    if (!(cr >= 1.0)) bsecg::fail(bsecg::ErrorCode::InvalidArgument, "cr must be >= 1");
    c->pipeline.cr = cr;
    c->pipeline.m.reset();
  });
}

bsecg_status bsecg_config_set_m(bsecg_config* c, uint32_t m) {
  return guarded([&] {
    require(c, "config");
    if (m < 1) bsecg::fail(bsecg::ErrorCode::InvalidArgument, "m must be >= 1");
    c->pipeline.m = static_cast<bsecg::Index>(m);
    c->pipeline.cr.reset();
  });
}

bsecg_status bsecg_config_set_seed(bsecg_config* c, uint64_t seed) {
  return guarded([&] {
    require(c, "config");
    c->pipeline.seed = seed;
  });
}

bsecg_status bsecg_config_set_lambda1(bsecg_config* c, double lambda1) {
  return guarded([&] {
    require(c, "config");
    if (lambda1 < 0.0) {
      c->pipeline.lambda1.reset();
    } else {
      c->pipeline.lambda1 = lambda1;
    }
  });
}

bsecg_status bsecg_config_set_lambda2(bsecg_config* c, double lambda2) {
  return guarded([&] {
    require(c, "config");
    if (lambda2 < 0.0) {
      c->pipeline.lambda2.reset();
    } else {
      c->pipeline.lambda2 = lambda2;
    }
  });
}

bsecg_status bsecg_config_set_lambda_heuristic(bsecg_config* c, double factor,
                                               double group_weight) {
  return guarded([&] {
    require(c, "config");
    if (!(factor > 0.0) || !(group_weight >= 0.0)) {
      bsecg::fail(bsecg::ErrorCode::InvalidArgument,
                  "lambda factor must be > 0 and group weight >= 0");
    }
    c->pipeline.lambda_factor = factor;
    c->pipeline.group_weight = group_weight;
  });
}

bsecg_status bsecg_config_set_groups(bsecg_config* c, uint32_t groups) {
  return guarded([&] {
    require(c, "config");
    c->pipeline.groups = static_cast<bsecg::Index>(groups);
  });
}

bsecg_status bsecg_config_set_fs(bsecg_config* c, double fs) {
  return guarded([&] {
    require(c, "config");
    if (!(fs > 0.0)) bsecg::fail(bsecg::ErrorCode::InvalidArgument, "fs must be positive");
    c->pipeline.fs = fs;
  });
}

bsecg_status bsecg_config_set_beat_length(bsecg_config* c, uint32_t n) {
  return guarded([&] {
    require(c, "config");
    c->pipeline.beat_length = static_cast<bsecg::Index>(n);
  });
}

bsecg_status bsecg_config_set_grid(bsecg_config* c, uint32_t n_shifts,
                                   uint32_t n_scales) {
  return guarded([&] {
    require(c, "config");
    c->pipeline.n_shifts = n_shifts;
    c->pipeline.n_scales = n_scales;
  });
}

bsecg_status bsecg_config_set_workers(bsecg_config* c, int workers) {
  return guarded([&] {
    require(c, "config");
    if (workers < 1) bsecg::fail(bsecg::ErrorCode::InvalidArgument, "workers must be >= 1");
    c->pipeline.workers = workers;
  });
}

bsecg_status bsecg_config_set_payload_f32(bsecg_config* c, int enable) {
  return guarded([&] {
    require(c, "config");
    c->pipeline.payload = enable ? bsecg::PayloadType::F32 : bsecg::PayloadType::F64;
  });
}

bsecg_status bsecg_config_set_identity_sensing(bsecg_config* c, int enable) {
  return guarded([&] {
    require(c, "config");
    c->pipeline.identity_sensing = enable != 0;
  });
}

bsecg_status bsecg_config_set_solver(bsecg_config* c, int max_iter, double tol,
                                     int continuation) {
  return guarded([&] {
    require(c, "config");
    bsecg::SolverConfig s = c->pipeline.solver;
    s.max_iter = max_iter;
    s.tol = tol;
    s.continuation = continuation != 0;
    s.validate();
    c->pipeline.solver = s;
  });
}

bsecg_status bsecg_config_set_coding_report(bsecg_config* c, int enable) {
  return guarded([&] {
    require(c, "config");
    c->pipeline.coding_report = enable != 0;
  });
}

bsecg_status bsecg_config_validate(const bsecg_config* c) {
  return guarded([&] {
    require(c, "config");
    c->pipeline.validate();
  });
}

// --------------------------------------------------------------- signals

bsecg_status bsecg_signal_read_csv(const char* path, double fs, bsecg_signal** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new bsecg_signal{bsecg::read_csv(path, fs)};
  });
}

bsecg_status bsecg_signal_from_data(const double* data, size_t rows, size_t leads,
                                    double fs, const char* const* names,
                                    bsecg_signal** out) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    const auto r = static_cast<bsecg::Index>(rows);
    const auto s = static_cast<bsecg::Index>(leads);
    bsecg::Matrix samples = Eigen::Map<const bsecg::Matrix>(data, r, s);
    std::vector<std::string> lead_names;
    if (names) {
      for (size_t i = 0; i < leads; ++i) {
        require(names[i], "lead name");
        lead_names.emplace_back(names[i]);
      }
    }
    *out = new bsecg_signal{bsecg::MultiLeadSignal::make(std::move(samples), fs,
                                                         std::move(lead_names))};
  });
}

void bsecg_signal_free(bsecg_signal* signal) { delete signal; }

size_t bsecg_signal_rows(const bsecg_signal* signal) {
  return signal ? static_cast<size_t>(signal->signal.length()) : 0;
}

size_t bsecg_signal_leads(const bsecg_signal* signal) {
  return signal ? static_cast<size_t>(signal->signal.leads()) : 0;
}

double bsecg_signal_fs(const bsecg_signal* signal) {
  return signal ? signal->signal.fs : 0.0;
}

bsecg_status bsecg_signal_copy_data(const bsecg_signal* signal, double* out,
                                    size_t capacity) {
  return guarded([&] {
    require(signal, "signal");
    require(out, "out");
    const auto& m = signal->signal.samples;
    if (capacity < static_cast<size_t>(m.size())) {
      bsecg::fail(bsecg::ErrorCode::Dimension,
                  "buffer holds " + std::to_string(capacity) + " values, need " +
                      std::to_string(m.size()));
    }
    std::copy(m.data(), m.data() + m.size(), out);
  });
}

const char* bsecg_signal_lead_name(const bsecg_signal* signal, size_t lead) {
  if (!signal || lead >= signal->signal.lead_names.size()) return nullptr;
  return signal->signal.lead_names[lead].c_str();
}

bsecg_status bsecg_signal_write_csv(const bsecg_signal* signal, const char* path) {
  return guarded([&] {
    require(signal, "signal");
    require(path, "path");
    bsecg::write_csv(path, signal->signal);
  });
}

// --------------------------------------------------------------- bundles

bsecg_status bsecg_compress(const bsecg_config* config, const bsecg_signal* signal,
                            bsecg_bundle** out) {
  return guarded([&] {
    require(signal, "signal");
    require(out, "out");
    auto beats = bsecg::compress_signal(signal->signal, config_or_default(config));
    auto* b = new bsecg_bundle;
    for (auto& beat : beats) {
      b->records.push_back(std::move(beat.bundle));
      b->coding.push_back(std::move(beat.coding));
    }
    *out = b;
  });
}

bsecg_status bsecg_decompress(const bsecg_bundle* bundle, const bsecg_config* config,
                              bsecg_signal** out) {
  return guarded([&] {
    require(bundle, "bundle");
    require(out, "out");
    const auto cfg = config_or_default(config);
    *out = new bsecg_signal{
        bsecg::decompress_bundles(bundle->records, cfg.solver, cfg.workers)};
  });
}

bsecg_status bsecg_bundle_read(const char* path, bsecg_bundle** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto* b = new bsecg_bundle;
    try {
      b->records = bsecg::read_bundles(path);
    } catch (...) {
      delete b;
      throw;
    }
    b->coding.resize(b->records.size());
    *out = b;
  });
}

bsecg_status bsecg_bundle_write(const bsecg_bundle* bundle, const char* path) {
  return guarded([&] {
    require(bundle, "bundle");
    require(path, "path");
    bsecg::write_bundles(path, bundle->records);
  });
}

void bsecg_bundle_free(bsecg_bundle* bundle) { delete bundle; }

size_t bsecg_bundle_records(const bsecg_bundle* bundle) {
  return bundle ? bundle->records.size() : 0;
}

bsecg_status bsecg_bundle_shape(const bsecg_bundle* bundle, size_t record,
                                uint32_t* n, uint32_t* m, uint32_t* leads) {
  return guarded([&] {
    const auto& r = record_at(bundle, record);
    if (n) *n = static_cast<uint32_t>(r.n());
    if (m) *m = r.m;
    if (leads) *leads = static_cast<uint32_t>(r.leads());
  });
}

bsecg_status bsecg_bundle_lambdas(const bsecg_bundle* bundle, size_t record,
                                  double* lambda1, double* lambda2) {
  return guarded([&] {
    const auto& r = record_at(bundle, record);
    if (lambda1) *lambda1 = r.lambda1;
    if (lambda2) *lambda2 = r.lambda2;
  });
}

bsecg_status bsecg_bundle_sparsity(const bsecg_bundle* bundle, size_t record,
                                   double* out, size_t capacity) {
  return guarded([&] {
    record_at(bundle, record);
    require(out, "out");
    const auto& coding = bundle->coding[record];
    if (!coding) {
      bsecg::fail(bsecg::ErrorCode::InvalidArgument,
                  "no sparse-coding report for this record");
    }
    if (capacity < coding->sparsity_percent.size()) {
      bsecg::fail(bsecg::ErrorCode::Dimension, "sparsity buffer too small");
    }
    std::copy(coding->sparsity_percent.begin(), coding->sparsity_percent.end(), out);
  });
}

// -------------------------------------------------------------- commands

bsecg_status bsecg_compress_file(const bsecg_config* config, const char* csv_in,
                                 const char* bundle_out) {
  return guarded([&] {
    require(csv_in, "input path");
    require(bundle_out, "output path");
    const auto cfg = config_or_default(config);
    const auto signal = bsecg::read_csv(csv_in, cfg.fs);
    auto beats = bsecg::compress_signal(signal, cfg);
    std::vector<bsecg::CompressedBundle> records;
    for (auto& beat : beats) records.push_back(std::move(beat.bundle));
    bsecg::write_bundles(bundle_out, records);
  });
}

bsecg_status bsecg_decompress_file(const bsecg_config* config, const char* bundle_in,
                                   const char* csv_out) {
  return guarded([&] {
    require(bundle_in, "input path");
    require(csv_out, "output path");
    const auto cfg = config_or_default(config);
    const auto records = bsecg::read_bundles(bundle_in);
    const auto signal = bsecg::decompress_bundles(records, cfg.solver, cfg.workers);
    bsecg::write_csv(csv_out, signal);
  });
}

bsecg_status bsecg_bench(const bsecg_config* config, const char* data_dir,
                         const double* crs, size_t n_crs, const char* methods,
                         const char* out_dir) {
  return guarded([&] {
    require(data_dir, "data directory");
    require(out_dir, "output directory");
    bsecg::BenchOptions options;
    options.pipeline = config_or_default(config);
    if (crs && n_crs > 0) options.crs.assign(crs, crs + n_crs);
    options.methods = parse_methods(methods);
    bsecg::bench_directory(data_dir, out_dir, options);
  });
}

bsecg_status bsecg_synth(const char* spec_path, uint64_t seed, double noise_std,
                         const char* csv_out) {
  return guarded([&] {
    require(csv_out, "output path");
    bsecg::SyntheticBeatSpec spec;
    if (spec_path) {
      std::ifstream f(spec_path, std::ios::binary);
      if (!f) bsecg::fail(bsecg::ErrorCode::Io, std::string("cannot open ") + spec_path);
      std::stringstream text;
      text << f.rdbuf();
      spec = bsecg::parse_synth_spec(text.str());
    } else {
      spec = bsecg::default_synth_spec(12, seed, noise_std);
    }
    bsecg::write_csv(csv_out, bsecg::generate_synthetic_beat(spec));
  });
}

}  // extern "C"
