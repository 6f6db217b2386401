#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "quadrature.hpp"
#include "quantize.hpp"

namespace szt {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

void check_step(double delta, double s) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(s > 0.0 && s < delta)) {
    throw std::invalid_argument("step must lie in (0, delta)");
  }
}

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }
}  // namespace

StepDist StepDist::deterministic(double s0) {
  if (!(s0 > 0.0)) throw std::invalid_argument("step must be > 0");
  StepDist d;
  d.kind = Kind::Deterministic;
  d.value = s0;
  d.cut = s0;
  return d;
}

StepDist StepDist::exponential_truncated(double mean, double cut) {
  if (!(mean > 0.0) || !(cut > 0.0)) {
    throw std::invalid_argument("exponential step needs mean > 0 and cut > 0");
  }
  StepDist d;
  d.kind = Kind::Exponential;
  d.value = mean;
  d.cut = cut;
  return d;
}

StepDist StepDist::empirical(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical step dist needs samples");
  StepDist d;
  d.kind = Kind::Empirical;
  d.cut = *std::max_element(samples.begin(), samples.end());
  for (double s : samples) {
    if (!(s > 0.0)) throw std::invalid_argument("step samples must be positive");
  }
  d.samples = std::move(samples);
  return d;
}

double StepDist::sample(RandomSource& rng) const {
  switch (kind) {
    case Kind::Deterministic:
      return value;
    case Kind::Exponential: {
      // inverse CDF of the exponential truncated to (0, cut)
      const double u = rng.uniform01();
      const double tail = -std::expm1(-cut / value);
      return -value * std::log1p(-u * tail);
    }
    case Kind::Empirical: {
      const std::uint64_t i = rng.next_u64() % samples.size();
      return samples[std::size_t(i)];
    }
  }
  return 0.0;
}

double StepDist::mgf(double theta) const {
  switch (kind) {
    case Kind::Deterministic:
      return std::exp(theta * value);
    case Kind::Exponential: {
      const double a = 1.0 / value;  // rate
      const double z = -std::expm1(-a * cut);
      // M(theta) = a c f((a - theta) c) / z with f(x) = -expm1(-x)/x,
      // finite and smooth through theta == a.
      const double x = (a - theta) * cut;
      const double f = std::fabs(x) < 1e-12 ? 1.0 - 0.5 * x : -std::expm1(-x) / x;
      return a * cut * f / z;
    }
    case Kind::Empirical: {
      double acc = 0.0;
      for (double s : samples) acc += std::exp(theta * s);
      return acc / double(samples.size());
    }
  }
  return 0.0;
}

double StepDist::max_support() const { return cut; }

double phi_f(const Prior& prior, double delta, double s) {
  check_step(delta, s);
  if (prior.kind() == Prior::Kind::Laplace) {
    const double b = prior.param();
    return std::exp(-delta / b) * std::expm1(s / b);
  }
  return 2.0 * integrate([&](double w) { return prior.pdf(w); }, delta - s, delta, 1e-10);
}

double phi_r(const Prior& prior, double delta, double s) {
  check_step(delta, s);
  if (prior.kind() == Prior::Kind::Laplace) {
    return -std::expm1(-s / prior.param());
  }
  return 2.0 * integrate([&](double w) { return prior.pdf(w); }, 0.0, s, 1e-10);
}

SensitivityReport sensitivity_ratio(const Prior& prior, double delta, double s) {
  SensitivityReport r;
  r.phi_f = phi_f(prior, delta, s);
  r.phi_r = phi_r(prior, delta, s);
  r.ratio = r.phi_f > 0.0 ? r.phi_r / r.phi_f
                          : std::numeric_limits<double>::infinity();
  const double pd = prior.pdf(delta);
  r.density_ratio = pd > 0.0 ? prior.pdf(0.0) / pd
                             : std::numeric_limits<double>::infinity();
  return r;
}

SensitivityMc sensitivity_mc(const Prior& prior, double delta, double s,
                             std::int64_t n, std::uint64_t seed) {
  check_step(delta, s);
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  RandomSource rng(seed);
  std::int64_t hits_f = 0, hits_r = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double w = prior.sample(rng);
    const double away = w >= 0.0 ? w + s : w - s;    // step away from zero
    const double toward = w >= 0.0 ? w - s : w + s;  // step toward zero
    const auto c0 = encode_szt(w, delta);
    const auto c_away = encode_szt(away, delta);
    const auto c_toward = encode_szt(toward, delta);
    if (numeric_value(c_away) != numeric_value(c0)) ++hits_f;
    if (numeric_value(c_toward) == numeric_value(c0) && c_toward != c0) ++hits_r;
  }
  SensitivityMc out;
  out.samples = n;
  out.phi_f_hat = double(hits_f) / double(n);
  out.phi_r_hat = double(hits_r) / double(n);
  out.se_f = std::sqrt(out.phi_f_hat * (1.0 - out.phi_f_hat) / double(n));
  out.se_r = std::sqrt(out.phi_r_hat * (1.0 - out.phi_r_hat) / double(n));
  return out;
}

double expected_ratio(const StepDist& step, double b, double delta) {
  if (!(b > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("expected_ratio needs b > 0 and delta > 0");
  }
  const double num = 1.0 - step.mgf(-1.0 / b);
  const double den = step.mgf(1.0 / b) - 1.0;
  if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
  return std::exp(delta / b) * num / den;
}

FeedbackEvents feedback_events(std::int64_t n_steps, const StepDist& step,
                               const Prior& prior, const std::vector<double>& deltas) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (deltas.empty()) throw std::invalid_argument("need at least one channel threshold");

  const auto mean_phi = [&](double delta, bool forward) {
    const auto f = [&](double s) { return forward ? phi_f(prior, delta, s) : phi_r(prior, delta, s); };
    switch (step.kind) {
      case StepDist::Kind::Deterministic:
        return f(step.value);
      case StepDist::Kind::Exponential: {
        const double a = 1.0 / step.value;
        const double z = -std::expm1(-a * step.cut);
        return integrate([&](double s) { return f(s) * a * std::exp(-a * s) / z; },
                         0.0, step.cut, 1e-10);
      }
      case StepDist::Kind::Empirical: {
        double acc = 0.0;
        for (double s : step.samples) acc += f(s);
        return acc / double(step.samples.size());
      }
    }
    return 0.0;
  };

  FeedbackEvents out;
  for (double d : deltas) {
    if (!(step.max_support() <= d)) {
      throw std::invalid_argument("step distribution must be supported inside (0, delta)");
    }
    const double ef = double(n_steps) * mean_phi(d, true);
    const double er = double(n_steps) * mean_phi(d, false);
    out.e_f_per_channel.push_back(ef);
    out.e_r_per_channel.push_back(er);
    out.e_f_total += ef;
    out.e_r_total += er;
  }
  return out;
}

double entropy_bt(double p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in [0, 1]");
  const double pside = 0.5 * (1.0 - p0);
  return -(xlog2x(p0) + 2.0 * xlog2x(pside));
}

double entropy_szt(double p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in [0, 1]");
  const double pside = 0.5 * (1.0 - p0);
  return -(2.0 * xlog2x(0.5 * p0) + 2.0 * xlog2x(pside));
}

double entropy_gap(double p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in [0, 1]");
  return p0;
}

double dead_zone_mass(const Prior& prior, double delta) {
  return prior.mass_within(delta);
}

double pac_bayes_bound(double emp_loss, double kl, std::int64_t n, double delta_conf) {
  if (n < 2) throw std::invalid_argument("pac_bayes_bound needs n >= 2");
  if (kl < 0.0) throw std::invalid_argument("kl must be >= 0");
  if (!(delta_conf > 0.0 && delta_conf < 1.0)) {
    throw std::invalid_argument("confidence delta must lie in (0, 1)");
  }
  const double num = kl + std::log(2.0 * std::sqrt(double(n)) / delta_conf);
  return emp_loss + std::sqrt(num / (2.0 * double(n - 1)));
}

double pac_bayes_gap(double d, double p0, std::int64_t n) {
  if (!(d >= 1.0)) throw std::invalid_argument("parameter count must be >= 1");
  if (n < 2) throw std::invalid_argument("pac_bayes_gap needs n >= 2");
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in [0, 1]");
  return std::sqrt(d * p0 * kLn2 / (2.0 * double(n - 1)));
}

double kl_reduction(double d, double p0) {
  if (!(d >= 1.0)) throw std::invalid_argument("parameter count must be >= 1");
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in [0, 1]");
  return d * p0 * kLn2;
}

CategoricalKl kl_categorical_pair(double p0_posterior, double p0_prior) {
  if (!(p0_posterior > 0.0 && p0_posterior < 1.0) ||
      !(p0_prior > 0.0 && p0_prior < 1.0)) {
    throw std::invalid_argument("dead-zone masses must lie in (0, 1)");
  }
  const double q_side = 0.5 * (1.0 - p0_posterior);
  const double p_side = 0.5 * (1.0 - p0_prior);
  const double p_zero = 0.5 * p0_prior;

  // four slots: {minus one, zero plus, zero minus, plus one}
  const double post_bt[4] = {q_side, p0_posterior, 0.0, q_side};
  const double post_szt[4] = {q_side, 0.5 * p0_posterior, 0.5 * p0_posterior, q_side};
  const double prior4[4] = {p_side, p_zero, p_zero, p_side};

  const auto kl = [&](const double* q) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (q[i] > 0.0) acc += q[i] * std::log(q[i] / prior4[i]);
    }
    return acc;
  };
  return {kl(post_bt), kl(post_szt)};
}

double mfpt_closed_bt(double kappa, double sigma, double delta) {
  if (!(kappa > 0.0 && sigma > 0.0 && delta > 0.0)) {
    throw std::invalid_argument("mfpt parameters must be positive");
  }
  const double lam = kappa * delta / sigma;
  const double sqrt_pi = std::sqrt(kPi);
  return sqrt_pi / (2.0 * kappa) *
         (std::exp(lam * lam) * std::erf(lam) - lam * sqrt_pi) / lam;
}

double mfpt_closed_szt(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  return 1.0 / kappa;
}

double mfpt_ratio(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  return std::sqrt(kPi) / (2.0 * lambda) * std::exp(lambda * lambda);
}

}  // namespace szt
