/*
 * szt: signed-zero ternary quantization toolkit.
 *
 * C interface to the core library. All functions return szt_status; outputs
 * go through pointer arguments. On failure a thread-local message is
 * available from szt_last_error(). Opaque handles are created and destroyed
 * with the matching *_create / *_free pairs and are not thread-safe to
 * mutate concurrently; treat each handle as single-owner.
 */

#ifndef SZT_H
#define SZT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SZT_API __declspec(dllexport)
#else
#define SZT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum szt_status {
  SZT_OK = 0,
  SZT_ERROR_INVALID_ARGUMENT = 1,
  SZT_ERROR_IO = 2,
  SZT_ERROR_CALIBRATION = 3,
  SZT_ERROR_DIVERGED = 4,
  SZT_ERROR_NO_ESCAPE = 5,
  SZT_ERROR_UNSUPPORTED = 6,
  SZT_ERROR_INTERNAL = 7
} szt_status;

SZT_API const char* szt_version(void);
/* Message for the most recent failure on this thread; never NULL. */
SZT_API const char* szt_last_error(void);

/* ------------------------------------------------------------------ codes */

/* Values are the 2-bit storage patterns: high bit = stored sign, low bit =
 * magnitude. */
typedef enum szt_code {
  SZT_CODE_ZERO_PLUS = 0,
  SZT_CODE_PLUS_ONE = 1,
  SZT_CODE_ZERO_MINUS = 2,
  SZT_CODE_MINUS_ONE = 3
} szt_code;

SZT_API int szt_code_numeric(szt_code c);     /* -1, 0, +1 */
SZT_API int szt_code_stored_sign(szt_code c); /* -1 or +1 */

/* out must hold (n + 3) / 4 bytes; trailing slots pack as SZT_CODE_ZERO_PLUS. */
SZT_API szt_status szt_pack(const szt_code* codes, size_t n, uint8_t* out);
/* Inverse on the first n slots; fails if n > 4 * n_bytes. */
SZT_API szt_status szt_unpack(const uint8_t* bytes, size_t n_bytes, size_t n,
                              szt_code* out);

SZT_API szt_status szt_encode_bt(double w, double delta, szt_code* out);
SZT_API szt_status szt_encode_szt(double w, double delta, szt_code* out);
SZT_API szt_status szt_encode_szt_activation(double u, double delta_pos,
                                             double delta_neg, szt_code* out);

/* ------------------------------------------------------------------ prior */

typedef struct szt_prior szt_prior;

SZT_API szt_status szt_prior_laplace(double b, szt_prior** out);
SZT_API szt_status szt_prior_gaussian(double sigma, szt_prior** out);
SZT_API szt_status szt_prior_half_laplace(double b, szt_prior** out);
SZT_API szt_status szt_prior_half_gaussian(double sigma, szt_prior** out);
SZT_API szt_status szt_prior_empirical(const double* xs, size_t n, szt_prior** out);
SZT_API void szt_prior_free(szt_prior* p);

SZT_API szt_status szt_prior_pdf(const szt_prior* p, double w, double* out);
SZT_API szt_status szt_prior_std(const szt_prior* p, double* out);
SZT_API szt_status szt_dead_zone_mass(const szt_prior* p, double delta, double* out);

/* -------------------------------------------------------------- quantizer */

SZT_API szt_status szt_mse_forward(const szt_prior* p, double delta, double* out);
SZT_API szt_status szt_optimal_threshold(const szt_prior* p, double* out);

typedef struct szt_calibration {
  double delta;
  double k;
  double forward_mse;
} szt_calibration;

/* rule: "sigma", "fixed_k" (uses k), or "prior_optimal" (uses prior). */
SZT_API szt_status szt_calibrate(const double* weights, size_t n, const char* rule,
                                 double k, const szt_prior* prior,
                                 szt_calibration* out);

/* ----------------------------------------------------------------- tensor */

typedef struct szt_tensor szt_tensor;

/* channel_axis < 0 selects per-layer granularity. scale_rule: 0 = threshold
 * (decode levels are +-delta), 1 = unit. */
SZT_API szt_status szt_quantize(const double* weights, const int64_t* dims,
                                int rank, int channel_axis, const char* rule,
                                double k, int scale_rule, szt_tensor** out);
SZT_API void szt_tensor_free(szt_tensor* t);

SZT_API szt_status szt_tensor_save(const szt_tensor* t, const char* path);
SZT_API szt_status szt_tensor_load(const char* path, szt_tensor** out);

SZT_API szt_status szt_tensor_rank(const szt_tensor* t, int* out);
SZT_API szt_status szt_tensor_dims(const szt_tensor* t, int64_t* out); /* rank entries */
SZT_API szt_status szt_tensor_numel(const szt_tensor* t, int64_t* out);
/* -1 when per-layer, otherwise the channel axis. */
SZT_API szt_status szt_tensor_channel_axis(const szt_tensor* t, int* out);
SZT_API szt_status szt_tensor_num_thresholds(const szt_tensor* t, size_t* out);
SZT_API szt_status szt_tensor_thresholds(const szt_tensor* t, double* out);
SZT_API szt_status szt_tensor_scales(const szt_tensor* t, double* out);
/* out must hold numel entries. */
SZT_API szt_status szt_tensor_codes(const szt_tensor* t, szt_code* out);
SZT_API szt_status szt_tensor_decode(const szt_tensor* t, double* out);
/* Histogram of the four code words, out[4]. */
SZT_API szt_status szt_tensor_code_counts(const szt_tensor* t, int64_t* out);

/* y = scale * codes * x for a rank-2 tensor; x has cols entries, y rows. */
SZT_API szt_status szt_gemm(const szt_tensor* t, const double* x, size_t x_len,
                            double* y, size_t y_len, int threads);

/* Dense float32 file + JSON sidecar ({"dims": [...]}) helpers. */
SZT_API szt_status szt_quantize_file(const char* weights_path, const char* sidecar_path,
                                     int channel_axis, const char* rule, double k,
                                     int scale_rule, const char* out_szt_path,
                                     szt_calibration* first_channel);
SZT_API szt_status szt_calibrate_file(const char* weights_path, const char* sidecar_path,
                                      const char* rule, double k, szt_calibration* out);

/* --------------------------------------------------------------- backward */

typedef enum szt_ste_kind { SZT_STE_BT = 0, SZT_STE_SZT = 1, SZT_STE_SR = 2 } szt_ste_kind;

/* grad_out receives n entries; seed feeds the SR pipeline (ignored for the
 * deterministic kinds). */
SZT_API szt_status szt_ste_backward(szt_ste_kind kind, double w, double delta,
                                    szt_code code, const double* upstream, size_t n,
                                    uint64_t seed, double* grad_out);
SZT_API szt_status szt_sr_round(double w, double delta, uint64_t seed, szt_code* out);
SZT_API szt_status szt_bias_bound(szt_ste_kind kind, double w, double delta,
                                  double g_norm, double* out);
SZT_API szt_status szt_variance_bound(szt_ste_kind kind, double delta, double g_norm,
                                      double* out);

typedef struct szt_bias_variance {
  double bias_sq;
  double variance;
  double mse;
  int64_t trials;
  double bias_se;
  double variance_se;
} szt_bias_variance;

SZT_API szt_status szt_mse_estimate_mc(szt_ste_kind kind, double w, double delta,
                                       const double* g, size_t g_len, int64_t trials,
                                       uint64_t seed, szt_bias_variance* out);
SZT_API szt_status szt_avg_dead_zone_mse(const szt_prior* p, double k, double* out);

/* --------------------------------------------------------------- analysis */

SZT_API szt_status szt_phi_f(const szt_prior* p, double delta, double s, double* out);
SZT_API szt_status szt_phi_r(const szt_prior* p, double delta, double s, double* out);

typedef struct szt_sensitivity {
  double phi_f;
  double phi_r;
  double ratio;
  double density_ratio; /* p(0) / p(delta) */
} szt_sensitivity;

SZT_API szt_status szt_sensitivity_ratio(const szt_prior* p, double delta, double s,
                                         szt_sensitivity* out);

SZT_API szt_status szt_entropy_bt(double p0, double* out);
SZT_API szt_status szt_entropy_szt(double p0, double* out);
SZT_API szt_status szt_entropy_gap(double p0, double* out);

SZT_API szt_status szt_pac_bayes_bound(double emp_loss, double kl, int64_t n,
                                       double delta_conf, double* out);
SZT_API szt_status szt_pac_bayes_gap(double d, double p0, int64_t n, double* out);
SZT_API szt_status szt_kl_reduction(double d, double p0, double* out);

SZT_API szt_status szt_mfpt_closed_bt(double kappa, double sigma, double delta, double* out);
SZT_API szt_status szt_mfpt_closed_szt(double kappa, double* out);
SZT_API szt_status szt_mfpt_ratio(double lambda, double* out);

/* ------------------------------------------------------------- simulation */

typedef struct szt_ou_params {
  double kappa;
  double sigma;
  double delta;
  double dt;
  int64_t trials;
  uint64_t seed;
  int threads;
} szt_ou_params;

typedef struct szt_mfpt_estimate {
  double mean;
  double ci95_halfwidth;
  int64_t trials_escaped;
} szt_mfpt_estimate;

SZT_API szt_status szt_ou_mfpt_mc(const szt_ou_params* params, szt_mfpt_estimate* out);
SZT_API szt_status szt_ou_mfpt_bvp(double kappa, double sigma, double delta, double* out);

typedef struct szt_renewal_estimate {
  double mean_t_f;
  double mean_t_r;
  double se_t_f;
  double se_t_r;
} szt_renewal_estimate;

/* step_kind: "deterministic" (step_param = the step) or "exponential"
 * (step_param = the mean, truncated at delta). */
SZT_API szt_status szt_renewal_mc(const char* step_kind, double step_param,
                                  const szt_prior* prior, double delta, int64_t trials,
                                  uint64_t seed, szt_renewal_estimate* out);

/* --------------------------------------------------------------- training */

typedef struct szt_train_config {
  szt_ste_kind ste;
  const char* task; /* "regression" or "parity" */
  int in_dim;
  int hidden_dim;
  int out_dim;
  int64_t dataset_size;
  double noise;
  int epochs;
  int batch;
  double lr;
  double momentum_beta;
  uint64_t seed;
  int refresh_per_epoch; /* 0: thresholds fixed after init, 1: per epoch */
  int threads;
} szt_train_config;

typedef struct szt_train_report {
  double final_loss;
  uint64_t numeric_transitions;
  uint64_t representational_transitions;
  char checkpoint_digest[65];
} szt_train_report;

/* Fills defaults: szt regression net 6-10-3, 256 samples, 3 epochs. */
SZT_API void szt_train_config_default(szt_train_config* cfg);
/* report_json_path may be NULL; when given, a JSON report with the loss
 * curve is written there. checkpoint_prefix may be NULL; when given, the
 * final codes are written as <prefix>_w{1,2}.szt and the latent weights as
 * <prefix>_w{1,2}.bin with JSON sidecars. */
SZT_API szt_status szt_train_run(const szt_train_config* cfg,
                                 const char* report_json_path,
                                 const char* checkpoint_prefix,
                                 szt_train_report* out);

/* ----------------------------------------------------------- verification */

/* Runs a named suite ("sensitivity", "entropy", "mse", "pacbayes", "mfpt",
 * "snr", "repro", "all") and writes the row table as CSV to csv_path
 * (skipped when NULL). Counters may be NULL. */
SZT_API szt_status szt_verify(const char* suite, const char* csv_path, int* n_pass,
                              int* n_flag, int* n_fail);

/* Closed-form vs oracle tables: "sensitivity", "dzmse", "mse", "entropy",
 * "mgf", "pacbayes", "mfpt". */
SZT_API szt_status szt_analyze(const char* quantity, const char* csv_path, int* n_rows);

/* sha-256 of a file, hex into out[65]. */
SZT_API szt_status szt_sha256_file(const char* path, char* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SZT_H */
