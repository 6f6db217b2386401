#pragma once

#include <cstdint>
#include <vector>

#include "prior.hpp"
#include "rng.hpp"

namespace szt {

// Random step-magnitude distribution for the small-step regime, supported
// inside (0, cut).
struct StepDist {
  enum class Kind { Deterministic, Exponential, Empirical };
  Kind kind = Kind::Deterministic;
  double value = 0.0;  // Deterministic: the step; Exponential: the mean
  double cut = 0.0;    // Exponential truncation point
  std::vector<double> samples;

  static StepDist deterministic(double s0);
  static StepDist exponential_truncated(double mean, double cut);
  static StepDist empirical(std::vector<double> samples);

  double sample(RandomSource& rng) const;
  // E[exp(theta S)] exactly for Deterministic/Exponential, sample average
  // for Empirical.
  double mgf(double theta) const;
  double max_support() const;
};

// Probability that a step of magnitude s flips the numeric value:
// 2 * integral of p over (delta - s, delta]. Exact for Laplace, quadrature
// otherwise. Requires 0 < s < delta.
double phi_f(const Prior& prior, double delta, double s);

// Probability that a step of magnitude s flips only the stored sign:
// 2 * integral of p over (0, s]. Exact for Laplace.
double phi_r(const Prior& prior, double delta, double s);

struct SensitivityReport {
  double phi_f = 0.0;
  double phi_r = 0.0;
  double ratio = 0.0;           // phi_r / phi_f; +inf when phi_f == 0
  double density_ratio = 0.0;   // p(0) / p(delta), the s -> 0 limit of ratio
};

SensitivityReport sensitivity_ratio(const Prior& prior, double delta, double s);

// Monte Carlo estimate of the same two probabilities by transition counting
// on sampled weights: a numeric event fires when a step of size s away from
// zero changes the code's numeric value, a representational event when a
// step of size s toward zero flips the stored sign without changing the
// numeric value.
struct SensitivityMc {
  double phi_f_hat = 0.0;
  double phi_r_hat = 0.0;
  double se_f = 0.0;
  double se_r = 0.0;
  std::int64_t samples = 0;
};
SensitivityMc sensitivity_mc(const Prior& prior, double delta, double s,
                             std::int64_t n, std::uint64_t seed);

// Step-averaged ratio E[phi_r(S)] / E[phi_f(S)] for a Laplace prior:
//   exp(delta/b) (1 - M(-1/b)) / (M(1/b) - 1),  M the MGF of S.
double expected_ratio(const StepDist& step, double b, double delta);

// Expected numeric/representational event counts over n_steps, per channel
// and aggregated.
struct FeedbackEvents {
  std::vector<double> e_f_per_channel;
  std::vector<double> e_r_per_channel;
  double e_f_total = 0.0;
  double e_r_total = 0.0;
};
FeedbackEvents feedback_events(std::int64_t n_steps, const StepDist& step,
                               const Prior& prior, const std::vector<double>& deltas);

// Code-word entropies for dead-zone mass p0 with the symmetric split
// P+ = P- = (1 - p0) / 2; 0 log 0 := 0. The gap H_szt - H_bt equals p0 bits.
double entropy_bt(double p0);
double entropy_szt(double p0);
double entropy_gap(double p0);

// Dead-zone mass P0 = Pr(|w| <= delta) via the prior CDF.
double dead_zone_mass(const Prior& prior, double delta);

// Risk bound: emp_loss + sqrt((kl + ln(2 sqrt(n)/delta_conf)) / (2(n-1))).
double pac_bayes_bound(double emp_loss, double kl, std::int64_t n, double delta_conf);

// Bound tightening from d weights with dead-zone mass p0:
// sqrt(d p0 ln2 / (2(n-1))).
double pac_bayes_gap(double d, double p0, std::int64_t n);

// Description-length reduction d * p0 * ln 2 in nats.
double kl_reduction(double d, double p0);

// Explicit categorical check on the four-code-word alphabet. The posterior
// places mass {P-, p0, 0, P+} with the single zero stored as the ZeroPlus
// pattern (three-state use of the alphabet) versus {P-, p0/2, p0/2, P+}
// (split zero). The prior quantizes an independent initialization with the
// split rule: {Q-, q0/2, q0/2, Q+}. Returns both discrete KLs in nats; their
// difference is exactly p0 * ln 2, independent of the prior masses.
struct CategoricalKl {
  double kl_bt = 0.0;
  double kl_szt = 0.0;
};
CategoricalKl kl_categorical_pair(double p0_posterior, double p0_prior);

// Closed-form mean first-passage times of the mean-reverting proxy process
// out of [-delta, delta], lambda = kappa delta / sigma:
//   three-state:  sqrt(pi)/(2 kappa) (exp(lambda^2) erf(lambda) -
//                 lambda sqrt(pi)) / lambda
//   four-state:   1 / kappa
// These are reported quantities; the simulation module carries the oracle.
double mfpt_closed_bt(double kappa, double sigma, double delta);
double mfpt_closed_szt(double kappa);
double mfpt_ratio(double lambda);

}  // namespace szt
