#pragma once

#include <cstdint>

#include "analysis.hpp"
#include "prior.hpp"

namespace szt {

// Mean-reverting diffusion dW = -kappa W dt + sigma dB simulated by
// Euler-Maruyama from W0 = 0 until |W| >= delta (inclusive exit test).
struct OuParams {
  double kappa = 1.0;
  double sigma = 1.0;
  double delta = 1.0;
  double dt = 1e-4;
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  int threads = 1;

  // Requires kappa, sigma, delta, dt > 0 and the resolution guard
  // dt <= delta^2 / (100 sigma^2).
  void validate() const;
  double lambda() const { return kappa * delta / sigma; }
};

struct MfptEstimate {
  double mean = 0.0;
  double ci95_halfwidth = 0.0;
  std::int64_t trials_escaped = 0;
};

// Per-path hard cap; exceeding it raises NoEscapeError with diagnostics.
inline constexpr std::int64_t kMaxStepsPerPath = 100'000'000;

// Monte Carlo mean first-passage time. Trials use derived per-trial streams
// and a fixed-order reduction, so the estimate is identical for every
// thread count.
MfptEstimate ou_mfpt_mc(const OuParams& params);

// Oracle: solves -kappa w tau' + sigma^2/2 tau'' = -1, tau(+-delta) = 0 by
// the double-quadrature representation for the symmetric exit problem and
// evaluates at w = 0 (adaptive quadrature, rel tol 1e-8 or better).
double ou_mfpt_bvp(double kappa, double sigma, double delta);

// Renewal model: every step draws a magnitude S and fires a numeric event
// with probability phi_f(S) and a sign event with probability phi_r(S);
// returns mean waiting times to the first event of each type.
struct RenewalEstimate {
  double mean_t_f = 0.0;
  double mean_t_r = 0.0;
  double se_t_f = 0.0;
  double se_t_r = 0.0;
  double var_t_f = 0.0;
  double var_t_r = 0.0;
};
RenewalEstimate renewal_mc(const StepDist& step, const Prior& prior, double delta,
                           std::int64_t trials, std::uint64_t seed);

}  // namespace szt
