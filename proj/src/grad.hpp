#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "codes.hpp"
#include "prior.hpp"
#include "rng.hpp"

namespace szt {

// Backward-rule selector. BT and SZT are deterministic; SR draws its forward
// code from a RandomSource.
enum class SteKind { BT, SZT, SR };

const char* ste_name(SteKind k);

// Straight-through surrogate gradient. Outside the dead zone every kind
// passes `upstream` unchanged. Inside it, BT passes unchanged, SZT multiplies
// by the stored sign of `code`, and SR also passes unchanged (its
// stochasticity lives in sr_round). SR requires an rng even though the
// surrogate is the identity; the call is part of the stochastic pipeline.
std::vector<double> ste_backward(SteKind kind, double w, double delta,
                                 TernaryCode code, std::span<const double> upstream,
                                 RandomSource* rng = nullptr);

// Distance-weighted stochastic rounding. For 0 <= w <= delta the result is
// +1 with probability w/delta, else zero; mirrored for negative w. The zero
// outcome is always the ZeroPlus pattern: this scheme has no signed zero.
// |w| > delta clamps to the nearest endpoint code.
TernaryCode sr_round(double w, double delta, RandomSource& rng);

// Dead-zone bias upper bound per estimator: BT -> g_norm,
// SZT -> (|w|/delta) g_norm, SR -> 0. Requires |w| <= delta.
double bias_bound(SteKind kind, double w, double delta, double g_norm);

// Extra-variance upper bound: BT, SZT -> 0; SR -> delta^2 g_norm^2 / 4.
double variance_bound(SteKind kind, double delta, double g_norm);

struct BiasVarianceReport {
  double bias_sq = 0.0;    // squared bias, gradient units^2
  double variance = 0.0;   // extra variance
  double mse = 0.0;        // bias_sq + variance
  std::int64_t trials = 0;
  double bias_se = 0.0;      // standard error of the mean error norm
  double variance_se = 0.0;  // standard error of the variance estimate
};

// Monte Carlo bias^2/variance of an estimator's dead-zone error signal
// against the true in-zone gradient 0. Per-trial error vectors follow the
// estimators' error accounting:
//   BT:  g                          (full upstream passed, truth is 0)
//   SZT: (|w|/delta) sgn(w) g       (sign-carrying surrogate; what remains
//                                    is the distance-to-zero remainder)
//   SR:  (delta v(sr_round) - w) g  (rounding noise scaled by the upstream)
// Deterministic kinds report variance exactly 0.
BiasVarianceReport mse_estimate_mc(SteKind kind, double w, double delta,
                                   std::span<const double> g, std::int64_t trials,
                                   std::uint64_t seed);

// Conditional second moment E[(|w|/delta)^2 | |w| <= delta] at delta = k
// times the prior's standard deviation. Laplace and Gaussian use closed
// forms; other priors go through quadrature (rel tol 1e-8).
double avg_dead_zone_mse(const Prior& prior, double k);
double avg_dead_zone_mse_quadrature(const Prior& prior, double k);

// Momentum recursion m <- beta m + g_hat with the dead-zone surrogate:
// g_hat = 0 for BT, the (sign-aligned) gradient for SZT and SR. Returns the
// squared-magnitude trajectory, one entry per step.
std::vector<double> momentum_simulate(SteKind kind, double beta, double m0,
                                      std::span<const double> g_seq);

}  // namespace szt
