#include "szt/szt.h"

#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <new>
#include <string>

#include "analysis.hpp"
#include "errors.hpp"
#include "grad.hpp"
#include "kernel.hpp"
#include "prior.hpp"
#include "quantize.hpp"
#include "report.hpp"
#include "sha256.hpp"
#include "sim.hpp"
#include "tensor.hpp"
#include "train.hpp"
#include "verify.hpp"

namespace {

thread_local std::string g_last_error = "ok";

szt_status fail(szt_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
szt_status guarded(Fn&& fn) {
  try {
    fn();
    return SZT_OK;
  } catch (const szt::CalibrationError& e) {
    return fail(SZT_ERROR_CALIBRATION, e.what());
  } catch (const szt::IoError& e) {
    return fail(SZT_ERROR_IO, e.what());
  } catch (const szt::DivergedError& e) {
    return fail(SZT_ERROR_DIVERGED, e.what());
  } catch (const szt::NoEscapeError& e) {
    return fail(SZT_ERROR_NO_ESCAPE, e.what());
  } catch (const szt::UnsupportedError& e) {
    return fail(SZT_ERROR_UNSUPPORTED, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SZT_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(SZT_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SZT_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SZT_ERROR_INTERNAL, e.what());
  }
}

szt_status require(bool ok, const char* what) {
  return ok ? SZT_OK : fail(SZT_ERROR_INVALID_ARGUMENT, what);
}

szt::SteKind to_ste(szt_ste_kind k) {
  switch (k) {
    case SZT_STE_BT: return szt::SteKind::BT;
    case SZT_STE_SZT: return szt::SteKind::SZT;
    default: return szt::SteKind::SR;
  }
}

szt::ThresholdRule parse_rule(const char* rule, double k, const szt_prior* prior);

}  // namespace

struct szt_prior {
  szt::Prior prior;
};

struct szt_tensor {
  szt::PackedTernaryTensor tensor;
};

namespace {

szt::ThresholdRule parse_rule(const char* rule, double k, const szt_prior* prior) {
  const std::string r = rule == nullptr ? "sigma" : rule;
  if (r == "sigma") return szt::ThresholdRule::sigma();
  if (r == "fixed_k") return szt::ThresholdRule::fixed_k(k);
  if (r == "prior_optimal") {
    if (prior == nullptr) throw std::invalid_argument("prior_optimal rule needs a prior");
    return szt::ThresholdRule::prior_optimal(prior->prior);
  }
  throw std::invalid_argument("unknown threshold rule: " + r);
}

}  // namespace

extern "C" {

const char* szt_version(void) { return "1.0.0"; }

const char* szt_last_error(void) { return g_last_error.c_str(); }

int szt_code_numeric(szt_code c) { return szt::numeric_value(static_cast<szt::TernaryCode>(c)); }

int szt_code_stored_sign(szt_code c) { return szt::stored_sign(static_cast<szt::TernaryCode>(c)); }

szt_status szt_pack(const szt_code* codes, size_t n, uint8_t* out) {
  if (auto s = require(out != nullptr && (codes != nullptr || n == 0), "null buffer"); s != SZT_OK) return s;
  return guarded([&] {
    std::vector<szt::TernaryCode> cs(n);
    for (size_t i = 0; i < n; ++i) cs[i] = static_cast<szt::TernaryCode>(codes[i]);
    const auto bytes = szt::pack_codes(cs);
    std::memcpy(out, bytes.data(), bytes.size());
  });
}

szt_status szt_unpack(const uint8_t* bytes, size_t n_bytes, size_t n, szt_code* out) {
  if (auto s = require(out != nullptr && (bytes != nullptr || n_bytes == 0), "null buffer"); s != SZT_OK) return s;
  return guarded([&] {
    const std::vector<std::uint8_t> bs(bytes, bytes + n_bytes);
    const auto cs = szt::unpack_codes(bs, n);
    for (size_t i = 0; i < n; ++i) out[i] = static_cast<szt_code>(cs[i]);
  });
}

szt_status szt_encode_bt(double w, double delta, szt_code* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = static_cast<szt_code>(szt::encode_bt(w, delta)); });
}

szt_status szt_encode_szt(double w, double delta, szt_code* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = static_cast<szt_code>(szt::encode_szt(w, delta)); });
}

szt_status szt_encode_szt_activation(double u, double delta_pos, double delta_neg, szt_code* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = static_cast<szt_code>(szt::encode_szt_activation(u, delta_pos, delta_neg)); });
}

szt_status szt_prior_laplace(double b, szt_prior** out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = new szt_prior{szt::Prior::laplace(b)}; });
}

szt_status szt_prior_gaussian(double sigma, szt_prior** out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = new szt_prior{szt::Prior::gaussian(sigma)}; });
}

szt_status szt_prior_half_laplace(double b, szt_prior** out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = new szt_prior{szt::Prior::half_laplace(b)}; });
}

szt_status szt_prior_half_gaussian(double sigma, szt_prior** out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = new szt_prior{szt::Prior::half_gaussian(sigma)}; });
}

szt_status szt_prior_empirical(const double* xs, size_t n, szt_prior** out) {
  if (auto s = require(out != nullptr && xs != nullptr, "null input"); s != SZT_OK) return s;
  return guarded([&] { *out = new szt_prior{szt::Prior::empirical(std::vector<double>(xs, xs + n))}; });
}

void szt_prior_free(szt_prior* p) { delete p; }

szt_status szt_prior_pdf(const szt_prior* p, double w, double* out) {
  if (auto s = require(p != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] { *out = p->prior.pdf(w); });
}

szt_status szt_prior_std(const szt_prior* p, double* out) {
  if (auto s = require(p != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] { *out = p->prior.std_dev(); });
}

szt_status szt_dead_zone_mass(const szt_prior* p, double delta, double* out) {
  if (auto s = require(p != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::dead_zone_mass(p->prior, delta); });
}

szt_status szt_mse_forward(const szt_prior* p, double delta, double* out) {
  if (auto s = require(p != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::mse_forward(p->prior, delta); });
}

szt_status szt_optimal_threshold(const szt_prior* p, double* out) {
  if (auto s = require(p != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::optimal_threshold(p->prior); });
}

szt_status szt_calibrate(const double* weights, size_t n, const char* rule, double k,
                         const szt_prior* prior, szt_calibration* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] {
    const auto r = parse_rule(rule, k, prior);
    const auto span = std::span<const double>(weights, weights == nullptr ? 0 : n);
    const auto cal = szt::calibrate(span, r);
    out->delta = cal.delta;
    out->k = cal.k;
    out->forward_mse = cal.forward_mse;
  });
}

szt_status szt_quantize(const double* weights, const int64_t* dims, int rank,
                        int channel_axis, const char* rule, double k, int scale_rule,
                        szt_tensor** out) {
  if (auto s = require(out != nullptr && weights != nullptr && dims != nullptr && rank > 0, "null input"); s != SZT_OK) return s;
  return guarded([&] {
    szt::LayerQuantConfig cfg;
    cfg.granularity = channel_axis < 0 ? szt::Granularity::per_layer()
                                       : szt::Granularity::per_channel(channel_axis);
    cfg.threshold_rule = parse_rule(rule, k, nullptr);
    cfg.scale_rule = scale_rule == 1 ? szt::LayerQuantConfig::ScaleRule::Unit
                                     : szt::LayerQuantConfig::ScaleRule::EqualThreshold;
    std::vector<std::int64_t> d(dims, dims + rank);
    std::int64_t numel = 1;
    for (auto v : d) numel *= v;
    const auto span = std::span<const double>(weights, std::size_t(numel));
    *out = new szt_tensor{szt::quantize_tensor(span, d, cfg)};
  });
}

void szt_tensor_free(szt_tensor* t) { delete t; }

szt_status szt_tensor_save(const szt_tensor* t, const char* path) {
  if (auto s = require(t != nullptr && path != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] { szt::save_szt(t->tensor, path); });
}

szt_status szt_tensor_load(const char* path, szt_tensor** out) {
  if (auto s = require(out != nullptr && path != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] { *out = new szt_tensor{szt::load_szt(path)}; });
}

szt_status szt_tensor_rank(const szt_tensor* t, int* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  *out = static_cast<int>(t->tensor.dims.size());
  return SZT_OK;
}

szt_status szt_tensor_dims(const szt_tensor* t, int64_t* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  for (size_t i = 0; i < t->tensor.dims.size(); ++i) out[i] = t->tensor.dims[i];
  return SZT_OK;
}

szt_status szt_tensor_numel(const szt_tensor* t, int64_t* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  *out = t->tensor.numel();
  return SZT_OK;
}

szt_status szt_tensor_channel_axis(const szt_tensor* t, int* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  *out = t->tensor.granularity.per_layer_mode() ? -1 : t->tensor.granularity.axis;
  return SZT_OK;
}

szt_status szt_tensor_num_thresholds(const szt_tensor* t, size_t* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  *out = t->tensor.thresholds.size();
  return SZT_OK;
}

szt_status szt_tensor_thresholds(const szt_tensor* t, double* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  std::memcpy(out, t->tensor.thresholds.data(), sizeof(double) * t->tensor.thresholds.size());
  return SZT_OK;
}

szt_status szt_tensor_scales(const szt_tensor* t, double* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  std::memcpy(out, t->tensor.scales.data(), sizeof(double) * t->tensor.scales.size());
  return SZT_OK;
}

szt_status szt_tensor_codes(const szt_tensor* t, szt_code* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    const auto cs = t->tensor.codes();
    for (size_t i = 0; i < cs.size(); ++i) out[i] = static_cast<szt_code>(cs[i]);
  });
}

szt_status szt_tensor_decode(const szt_tensor* t, double* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    const auto v = t->tensor.decode();
    std::memcpy(out, v.data(), sizeof(double) * v.size());
  });
}

szt_status szt_tensor_code_counts(const szt_tensor* t, int64_t* out) {
  if (auto s = require(t != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    out[0] = out[1] = out[2] = out[3] = 0;
    for (const auto c : t->tensor.codes()) ++out[static_cast<int>(c)];
  });
}

szt_status szt_gemm(const szt_tensor* t, const double* x, size_t x_len, double* y,
                    size_t y_len, int threads) {
  if (auto s = require(t != nullptr && x != nullptr && y != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    if (t->tensor.dims.size() != 2 || t->tensor.dims[1] != std::int64_t(x_len) ||
        t->tensor.dims[0] != std::int64_t(y_len)) {
      throw std::invalid_argument("gemm buffer sizes do not match tensor dims");
    }
    const auto out = szt::ternary_gemm(t->tensor, std::span<const double>(x, x_len), threads);
    std::memcpy(y, out.data(), sizeof(double) * out.size());
  });
}

szt_status szt_quantize_file(const char* weights_path, const char* sidecar_path,
                             int channel_axis, const char* rule, double k, int scale_rule,
                             const char* out_szt_path, szt_calibration* first_channel) {
  if (auto s = require(weights_path != nullptr && out_szt_path != nullptr, "null path"); s != SZT_OK) return s;
  return guarded([&] {
    const auto dense = szt::load_f32_tensor(weights_path, sidecar_path == nullptr ? "" : sidecar_path);
    szt::LayerQuantConfig cfg;
    cfg.granularity = channel_axis < 0 ? szt::Granularity::per_layer()
                                       : szt::Granularity::per_channel(channel_axis);
    cfg.threshold_rule = parse_rule(rule, k, nullptr);
    cfg.scale_rule = scale_rule == 1 ? szt::LayerQuantConfig::ScaleRule::Unit
                                     : szt::LayerQuantConfig::ScaleRule::EqualThreshold;
    const auto t = szt::quantize_tensor(dense, cfg);
    szt::save_szt(t, out_szt_path);
    if (first_channel != nullptr) {
      std::vector<double> w(dense.values.begin(), dense.values.end());
      const auto cal = szt::calibrate(w, cfg.threshold_rule);
      first_channel->delta = cal.delta;
      first_channel->k = cal.k;
      first_channel->forward_mse = cal.forward_mse;
    }
  });
}

szt_status szt_calibrate_file(const char* weights_path, const char* sidecar_path,
                              const char* rule, double k, szt_calibration* out) {
  if (auto s = require(weights_path != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    const auto dense = szt::load_f32_tensor(weights_path, sidecar_path == nullptr ? "" : sidecar_path);
    std::vector<double> w(dense.values.begin(), dense.values.end());
    const auto cal = szt::calibrate(w, parse_rule(rule, k, nullptr));
    out->delta = cal.delta;
    out->k = cal.k;
    out->forward_mse = cal.forward_mse;
  });
}

szt_status szt_ste_backward(szt_ste_kind kind, double w, double delta, szt_code code,
                            const double* upstream, size_t n, uint64_t seed,
                            double* grad_out) {
  if (auto s = require(upstream != nullptr && grad_out != nullptr, "null gradient buffer"); s != SZT_OK) return s;
  return guarded([&] {
    szt::RandomSource rng(seed);
    const auto g = szt::ste_backward(to_ste(kind), w, delta,
                                     static_cast<szt::TernaryCode>(code),
                                     std::span<const double>(upstream, n),
                                     kind == SZT_STE_SR ? &rng : nullptr);
    std::memcpy(grad_out, g.data(), sizeof(double) * g.size());
  });
}

szt_status szt_sr_round(double w, double delta, uint64_t seed, szt_code* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] {
    szt::RandomSource rng(seed);
    *out = static_cast<szt_code>(szt::sr_round(w, delta, rng));
  });
}

szt_status szt_bias_bound(szt_ste_kind kind, double w, double delta, double g_norm, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::bias_bound(to_ste(kind), w, delta, g_norm); });
}

szt_status szt_variance_bound(szt_ste_kind kind, double delta, double g_norm, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::variance_bound(to_ste(kind), delta, g_norm); });
}

szt_status szt_mse_estimate_mc(szt_ste_kind kind, double w, double delta, const double* g,
                               size_t g_len, int64_t trials, uint64_t seed,
                               szt_bias_variance* out) {
  if (auto s = require(g != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    const auto r = szt::mse_estimate_mc(to_ste(kind), w, delta,
                                        std::span<const double>(g, g_len), trials, seed);
    out->bias_sq = r.bias_sq;
    out->variance = r.variance;
    out->mse = r.mse;
    out->trials = r.trials;
    out->bias_se = r.bias_se;
    out->variance_se = r.variance_se;
  });
}

szt_status szt_avg_dead_zone_mse(const szt_prior* p, double k, double* out) {
  if (auto s = require(p != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::avg_dead_zone_mse(p->prior, k); });
}

szt_status szt_phi_f(const szt_prior* p, double delta, double s, double* out) {
  if (auto st = require(p != nullptr && out != nullptr, "null argument"); st != SZT_OK) return st;
  return guarded([&] { *out = szt::phi_f(p->prior, delta, s); });
}

szt_status szt_phi_r(const szt_prior* p, double delta, double s, double* out) {
  if (auto st = require(p != nullptr && out != nullptr, "null argument"); st != SZT_OK) return st;
  return guarded([&] { *out = szt::phi_r(p->prior, delta, s); });
}

szt_status szt_sensitivity_ratio(const szt_prior* p, double delta, double s,
                                 szt_sensitivity* out) {
  if (auto st = require(p != nullptr && out != nullptr, "null argument"); st != SZT_OK) return st;
  return guarded([&] {
    const auto r = szt::sensitivity_ratio(p->prior, delta, s);
    out->phi_f = r.phi_f;
    out->phi_r = r.phi_r;
    out->ratio = r.ratio;
    out->density_ratio = r.density_ratio;
  });
}

szt_status szt_entropy_bt(double p0, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::entropy_bt(p0); });
}

szt_status szt_entropy_szt(double p0, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::entropy_szt(p0); });
}

szt_status szt_entropy_gap(double p0, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::entropy_gap(p0); });
}

szt_status szt_pac_bayes_bound(double emp_loss, double kl, int64_t n, double delta_conf, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::pac_bayes_bound(emp_loss, kl, n, delta_conf); });
}

szt_status szt_pac_bayes_gap(double d, double p0, int64_t n, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::pac_bayes_gap(d, p0, n); });
}

szt_status szt_kl_reduction(double d, double p0, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::kl_reduction(d, p0); });
}

szt_status szt_mfpt_closed_bt(double kappa, double sigma, double delta, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::mfpt_closed_bt(kappa, sigma, delta); });
}

szt_status szt_mfpt_closed_szt(double kappa, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::mfpt_closed_szt(kappa); });
}

szt_status szt_mfpt_ratio(double lambda, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::mfpt_ratio(lambda); });
}

szt_status szt_ou_mfpt_mc(const szt_ou_params* params, szt_mfpt_estimate* out) {
  if (auto s = require(params != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    szt::OuParams p;
    p.kappa = params->kappa;
    p.sigma = params->sigma;
    p.delta = params->delta;
    p.dt = params->dt;
    p.trials = params->trials;
    p.seed = params->seed;
    p.threads = params->threads;
    const auto est = szt::ou_mfpt_mc(p);
    out->mean = est.mean;
    out->ci95_halfwidth = est.ci95_halfwidth;
    out->trials_escaped = est.trials_escaped;
  });
}

szt_status szt_ou_mfpt_bvp(double kappa, double sigma, double delta, double* out) {
  if (auto s = require(out != nullptr, "null output"); s != SZT_OK) return s;
  return guarded([&] { *out = szt::ou_mfpt_bvp(kappa, sigma, delta); });
}

szt_status szt_renewal_mc(const char* step_kind, double step_param, const szt_prior* prior,
                          double delta, int64_t trials, uint64_t seed,
                          szt_renewal_estimate* out) {
  if (auto s = require(step_kind != nullptr && prior != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    const std::string kind = step_kind;
    if (kind != "deterministic" && kind != "exponential") {
      throw std::invalid_argument("unknown step kind: " + kind);
    }
    const szt::StepDist step = kind == "deterministic"
                                   ? szt::StepDist::deterministic(step_param)
                                   : szt::StepDist::exponential_truncated(step_param, delta);
    const auto est = szt::renewal_mc(step, prior->prior, delta, trials, seed);
    out->mean_t_f = est.mean_t_f;
    out->mean_t_r = est.mean_t_r;
    out->se_t_f = est.se_t_f;
    out->se_t_r = est.se_t_r;
  });
}

void szt_train_config_default(szt_train_config* cfg) {
  if (cfg == nullptr) return;
  cfg->ste = SZT_STE_SZT;
  cfg->task = "regression";
  cfg->in_dim = 6;
  cfg->hidden_dim = 10;
  cfg->out_dim = 3;
  cfg->dataset_size = 256;
  cfg->noise = 0.05;
  cfg->epochs = 3;
  cfg->batch = 32;
  cfg->lr = 0.05;
  cfg->momentum_beta = 0.9;
  cfg->seed = 0;
  cfg->refresh_per_epoch = 0;
  cfg->threads = 1;
}

szt_status szt_train_run(const szt_train_config* cfg, const char* report_json_path,
                         const char* checkpoint_prefix, szt_train_report* out) {
  if (auto s = require(cfg != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    szt::TrainConfig c;
    c.ste = to_ste(cfg->ste);
    const std::string task = cfg->task == nullptr ? "regression" : cfg->task;
    if (task == "regression") {
      c.task = szt::Task::Regression;
    } else if (task == "parity") {
      c.task = szt::Task::Parity;
    } else {
      throw std::invalid_argument("unknown task: " + task);
    }
    c.in_dim = cfg->in_dim;
    c.hidden_dim = cfg->hidden_dim;
    c.out_dim = cfg->out_dim;
    c.dataset_size = cfg->dataset_size;
    c.noise = cfg->noise;
    c.epochs = cfg->epochs;
    c.batch = cfg->batch;
    c.lr_schedule = {cfg->lr};
    c.momentum_beta = cfg->momentum_beta;
    c.seed = cfg->seed;
    c.delta_refresh = cfg->refresh_per_epoch ? szt::DeltaRefresh::PerEpoch
                                             : szt::DeltaRefresh::Never;
    c.threads = cfg->threads;
    szt::ToyNet net;
    szt::TrainState state;
    const auto report = szt::train(c, &net, &state);
    if (checkpoint_prefix != nullptr) szt::save_checkpoint(net, state, checkpoint_prefix);
    out->final_loss = report.final_loss;
    out->numeric_transitions = report.numeric_transitions;
    out->representational_transitions = report.representational_transitions;
    std::snprintf(out->checkpoint_digest, sizeof(out->checkpoint_digest), "%s",
                  report.checkpoint_digest.c_str());
    if (report_json_path != nullptr) {
      nlohmann::json j;
      j["ste"] = szt::ste_name(c.ste);
      j["task"] = task;
      j["epochs"] = c.epochs;
      j["seed"] = c.seed;
      j["loss_curve"] = report.loss_curve;
      j["final_loss"] = report.final_loss;
      j["numeric_transitions"] = report.numeric_transitions;
      j["representational_transitions"] = report.representational_transitions;
      j["checkpoint_digest"] = report.checkpoint_digest;
      std::ofstream f(report_json_path, std::ios::trunc);
      if (!f) throw szt::IoError(std::string("cannot open for writing: ") + report_json_path);
      f << j.dump(2) << "\n";
    }
  });
}

szt_status szt_verify(const char* suite, const char* csv_path, int* n_pass, int* n_flag,
                      int* n_fail) {
  if (auto s = require(suite != nullptr, "null suite name"); s != SZT_OK) return s;
  return guarded([&] {
    const auto rows = szt::run_verify_suite(suite);
    if (csv_path != nullptr) szt::write_csv(rows, csv_path);
    if (n_pass != nullptr) *n_pass = szt::count_status(rows, "PASS");
    if (n_flag != nullptr) *n_flag = szt::count_status(rows, "FLAG");
    if (n_fail != nullptr) *n_fail = szt::count_status(rows, "FAIL");
  });
}

szt_status szt_analyze(const char* quantity, const char* csv_path, int* n_rows) {
  if (auto s = require(quantity != nullptr, "null quantity name"); s != SZT_OK) return s;
  return guarded([&] {
    const auto rows = szt::run_analyze_table(quantity);
    if (csv_path != nullptr) szt::write_csv(rows, csv_path);
    if (n_rows != nullptr) *n_rows = static_cast<int>(rows.size());
  });
}

szt_status szt_sha256_file(const char* path, char* out) {
  if (auto s = require(path != nullptr && out != nullptr, "null argument"); s != SZT_OK) return s;
  return guarded([&] {
    const auto hex = szt::Sha256::hash_file_hex(path);
    std::memcpy(out, hex.c_str(), hex.size() + 1);
  });
}

}  // extern "C"
