#include "grad.hpp"

#include <cmath>
#include <stdexcept>

#include "errors.hpp"
#include "quadrature.hpp"
#include "quantize.hpp"

namespace szt {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

void check_delta(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
}
}  // namespace

const char* ste_name(SteKind k) {
  switch (k) {
    case SteKind::BT: return "bt";
    case SteKind::SZT: return "szt";
    case SteKind::SR: return "sr";
  }
  return "?";
}

std::vector<double> ste_backward(SteKind kind, double w, double delta,
                                 TernaryCode code, std::span<const double> upstream,
                                 RandomSource* rng) {
  check_delta(delta);
  if (kind == SteKind::SR && rng == nullptr) {
    throw std::invalid_argument("SR backward requires a RandomSource");
  }
  std::vector<double> out(upstream.begin(), upstream.end());
  if (std::fabs(w) > delta) return out;
  if (kind == SteKind::SZT) {
    const double s = stored_sign(code);
    for (double& g : out) g *= s;
  }
  return out;
}

TernaryCode sr_round(double w, double delta, RandomSource& rng) {
  check_delta(delta);
  if (w > delta) return TernaryCode::PlusOne;
  if (w < -delta) return TernaryCode::MinusOne;
  const double p = std::fabs(w) / delta;
  if (rng.uniform01() < p) {
    return w >= 0.0 ? TernaryCode::PlusOne : TernaryCode::MinusOne;
  }
  return TernaryCode::ZeroPlus;
}

double bias_bound(SteKind kind, double w, double delta, double g_norm) {
  check_delta(delta);
  if (std::fabs(w) > delta) {
    throw std::domain_error("bias_bound is defined inside the dead zone only");
  }
  if (g_norm < 0.0) throw std::invalid_argument("gradient norm must be >= 0");
  switch (kind) {
    case SteKind::BT: return g_norm;
    case SteKind::SZT: return std::fabs(w) / delta * g_norm;
    case SteKind::SR: return 0.0;
  }
  return 0.0;
}

double variance_bound(SteKind kind, double delta, double g_norm) {
  check_delta(delta);
  if (g_norm < 0.0) throw std::invalid_argument("gradient norm must be >= 0");
  return kind == SteKind::SR ? 0.25 * delta * delta * g_norm * g_norm : 0.0;
}

BiasVarianceReport mse_estimate_mc(SteKind kind, double w, double delta,
                                   std::span<const double> g, std::int64_t trials,
                                   std::uint64_t seed) {
  check_delta(delta);
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  // Per-trial scalar multiplier of g; the error vector is factor * g.
  RandomSource rng(seed);
  std::vector<double> factors(static_cast<std::size_t>(trials));
  switch (kind) {
    case SteKind::BT:
      for (auto& f : factors) f = 1.0;
      break;
    case SteKind::SZT: {
      const double s = stored_sign(encode_szt(w, delta));
      for (auto& f : factors) f = std::fabs(w) / delta * s;
      break;
    }
    case SteKind::SR:
      for (auto& f : factors) {
        f = delta * numeric_value(sr_round(w, delta, rng)) - w;
      }
      break;
  }

  double g_sq = 0.0;
  for (double gi : g) g_sq += gi * gi;

  // Deterministic kinds repeat one factor; take its mean exactly so the
  // reported variance is an exact zero rather than rounding dust.
  double mean_f;
  if (kind == SteKind::SR) {
    mean_f = 0.0;
    for (double f : factors) mean_f += f;
    mean_f /= double(trials);
  } else {
    mean_f = factors[0];
  }
  double var_f = 0.0, m4 = 0.0;
  for (double f : factors) {
    const double d = f - mean_f;
    var_f += d * d;
    m4 += d * d * d * d;
  }
  var_f /= double(trials);
  m4 /= double(trials);

  BiasVarianceReport r;
  r.trials = trials;
  r.bias_sq = mean_f * mean_f * g_sq;
  r.variance = var_f * g_sq;
  r.mse = r.bias_sq + r.variance;
  r.bias_se = std::sqrt(var_f / double(trials) * g_sq);
  const double var_of_var = std::max(0.0, m4 - var_f * var_f);
  r.variance_se = std::sqrt(var_of_var / double(trials)) * g_sq;
  return r;
}

double avg_dead_zone_mse(const Prior& prior, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("k must be > 0");
  switch (prior.kind()) {
    case Prior::Kind::Laplace: {
      // E[(|w|/delta)^2 | |w| <= delta], delta = k sigma, sigma = sqrt(2) b.
      const double e = std::exp(kSqrt2 * k);
      return (e - 1.0 - (k * k + kSqrt2 * k)) / (k * k * (e - 1.0));
    }
    case Prior::Kind::Gaussian: {
      const double erf_term = std::erf(k / kSqrt2);
      return 1.0 / (k * k) -
             kSqrt2 * std::exp(-0.5 * k * k) / (std::sqrt(kPi) * k * erf_term);
    }
    default:
      return avg_dead_zone_mse_quadrature(prior, k);
  }
}

double avg_dead_zone_mse_quadrature(const Prior& prior, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("k must be > 0");
  const double delta = k * prior.std_dev();
  const double lo = std::max(prior.support_min(), -delta);
  const double num = integrate(
      [&](double w) { return w * w * prior.pdf(w); }, lo, delta, 1e-10);
  const double mass = integrate([&](double w) { return prior.pdf(w); }, lo, delta, 1e-10);
  if (!(mass > 0.0)) throw std::invalid_argument("prior has no mass in the dead zone");
  return num / (delta * delta * mass);
}

std::vector<double> momentum_simulate(SteKind kind, double beta, double m0,
                                      std::span<const double> g_seq) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("momentum beta must lie in (0, 1)");
  }
  std::vector<double> traj;
  traj.reserve(g_seq.size());
  double m = m0;
  for (double g : g_seq) {
    const double g_hat = kind == SteKind::BT ? 0.0 : g;
    m = beta * m + g_hat;
    traj.push_back(m * m);
  }
  return traj;
}

}  // namespace szt
