#ifndef BSECG_BSECG_H
#define BSECG_BSECG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BSECG_API __declspec(dllexport)
#else
#define BSECG_API __attribute__((visibility("default")))
#endif

typedef enum bsecg_status {
  BSECG_OK = 0,
  BSECG_E_INVALID_ARGUMENT = 1,
  BSECG_E_DIMENSION = 2,
  BSECG_E_OUT_OF_RANGE = 3,
  BSECG_E_IO = 4,
  BSECG_E_FORMAT = 5,
  BSECG_E_NUMERIC = 6,
  BSECG_E_INTERNAL = 100
} bsecg_status;

typedef struct bsecg_config bsecg_config;
typedef struct bsecg_signal bsecg_signal;
typedef struct bsecg_bundle bsecg_bundle;

/* Message of the last failed call on this thread; "" after a success. */
BSECG_API const char* bsecg_last_error(void);
BSECG_API const char* bsecg_status_name(bsecg_status status);
BSECG_API const char* bsecg_version(void);

/* trace, debug, info, warn, error, off. Initially taken from the
   BSECG_LOG_LEVEL environment variable, default "warn". */
BSECG_API bsecg_status bsecg_set_log_level(const char* level);

/* ---- configuration ---------------------------------------------------- */

BSECG_API bsecg_status bsecg_config_new(bsecg_config** out);
BSECG_API void bsecg_config_free(bsecg_config* config);

/* rc, g, hs, tg (case-insensitive) */
BSECG_API bsecg_status bsecg_config_set_kernel(bsecg_config* c, const char* kernel);
/* Setting one of cr / m clears the other. */
BSECG_API bsecg_status bsecg_config_set_cr(bsecg_config* c, double cr);
BSECG_API bsecg_status bsecg_config_set_m(bsecg_config* c, uint32_t m);
BSECG_API bsecg_status bsecg_config_set_seed(bsecg_config* c, uint64_t seed);
/* A negative value restores the data-driven default. */
BSECG_API bsecg_status bsecg_config_set_lambda1(bsecg_config* c, double lambda1);
BSECG_API bsecg_status bsecg_config_set_lambda2(bsecg_config* c, double lambda2);
BSECG_API bsecg_status bsecg_config_set_lambda_heuristic(bsecg_config* c,
                                                         double factor,
                                                         double group_weight);
BSECG_API bsecg_status bsecg_config_set_groups(bsecg_config* c, uint32_t groups);
BSECG_API bsecg_status bsecg_config_set_fs(bsecg_config* c, double fs);
BSECG_API bsecg_status bsecg_config_set_beat_length(bsecg_config* c, uint32_t n);
BSECG_API bsecg_status bsecg_config_set_grid(bsecg_config* c, uint32_t n_shifts,
                                             uint32_t n_scales);
BSECG_API bsecg_status bsecg_config_set_workers(bsecg_config* c, int workers);
BSECG_API bsecg_status bsecg_config_set_payload_f32(bsecg_config* c, int enable);
BSECG_API bsecg_status bsecg_config_set_identity_sensing(bsecg_config* c, int enable);
BSECG_API bsecg_status bsecg_config_set_solver(bsecg_config* c, int max_iter,
                                               double tol, int continuation);
BSECG_API bsecg_status bsecg_config_set_coding_report(bsecg_config* c, int enable);
BSECG_API bsecg_status bsecg_config_validate(const bsecg_config* c);

/* ---- signals ---------------------------------------------------------- */

BSECG_API bsecg_status bsecg_signal_read_csv(const char* path, double fs,
                                             bsecg_signal** out);
/* `data` is rows x leads, column-major. `names` may be NULL. */
BSECG_API bsecg_status bsecg_signal_from_data(const double* data, size_t rows,
                                              size_t leads, double fs,
                                              const char* const* names,
                                              bsecg_signal** out);
BSECG_API void bsecg_signal_free(bsecg_signal* signal);
BSECG_API size_t bsecg_signal_rows(const bsecg_signal* signal);
BSECG_API size_t bsecg_signal_leads(const bsecg_signal* signal);
BSECG_API double bsecg_signal_fs(const bsecg_signal* signal);
/* Copies rows x leads values, column-major, into `out`. */
BSECG_API bsecg_status bsecg_signal_copy_data(const bsecg_signal* signal,
                                              double* out, size_t capacity);
/* NULL when out of range. Valid until the signal is freed. */
BSECG_API const char* bsecg_signal_lead_name(const bsecg_signal* signal,
                                             size_t lead);
BSECG_API bsecg_status bsecg_signal_write_csv(const bsecg_signal* signal,
                                              const char* path);

/* ---- bundles ---------------------------------------------------------- */

BSECG_API bsecg_status bsecg_compress(const bsecg_config* config,
                                      const bsecg_signal* signal,
                                      bsecg_bundle** out);
/* `config` may be NULL for the default solver settings. */
BSECG_API bsecg_status bsecg_decompress(const bsecg_bundle* bundle,
                                        const bsecg_config* config,
                                        bsecg_signal** out);
BSECG_API bsecg_status bsecg_bundle_read(const char* path, bsecg_bundle** out);
BSECG_API bsecg_status bsecg_bundle_write(const bsecg_bundle* bundle,
                                          const char* path);
BSECG_API void bsecg_bundle_free(bsecg_bundle* bundle);
/* Number of beat records. */
BSECG_API size_t bsecg_bundle_records(const bsecg_bundle* bundle);
BSECG_API bsecg_status bsecg_bundle_shape(const bsecg_bundle* bundle,
                                          size_t record, uint32_t* n,
                                          uint32_t* m, uint32_t* leads);
BSECG_API bsecg_status bsecg_bundle_lambdas(const bsecg_bundle* bundle,
                                            size_t record, double* lambda1,
                                            double* lambda2);
/* Per-lead sparsity (percent zeros) of the sparse code of X computed at
   compression time; fails if the report was disabled. */
BSECG_API bsecg_status bsecg_bundle_sparsity(const bsecg_bundle* bundle,
                                             size_t record, double* out,
                                             size_t capacity);

/* ---- whole commands --------------------------------------------------- */

BSECG_API bsecg_status bsecg_compress_file(const bsecg_config* config,
                                           const char* csv_in,
                                           const char* bundle_out);
BSECG_API bsecg_status bsecg_decompress_file(const bsecg_config* config,
                                             const char* bundle_in,
                                             const char* csv_out);
/* `methods` is a comma-separated list such as "chilasso-RC,lasso-RC";
   NULL or "" selects the default set. Writes report.csv, timings.csv and
   plot_<method>.csv into `out_dir`. */
BSECG_API bsecg_status bsecg_bench(const bsecg_config* config,
                                   const char* data_dir, const double* crs,
                                   size_t n_crs, const char* methods,
                                   const char* out_dir);
/* `spec_path` may be NULL for the built-in 12-lead beat, which then uses
   `seed` and `noise_std`. */
BSECG_API bsecg_status bsecg_synth(const char* spec_path, uint64_t seed,
                                   double noise_std, const char* csv_out);

#ifdef __cplusplus
}
#endif

#endif
