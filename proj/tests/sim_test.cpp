#include <doctest.h>

#include <cmath>

#include "analysis.hpp"
#include "errors.hpp"
#include "sim.hpp"

using namespace szt;

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
}

TEST_CASE("ou params validation") {
  OuParams p;
  p.dt = 0.011;  // above delta^2 / (100 sigma^2) = 0.01
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.dt = 0.01;
  CHECK_NOTHROW(p.validate());
  p.kappa = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("bvp oracle: diffusion limit and scale invariance") {
  // kappa -> 0 reduces to the flat-interval exit time delta^2 / sigma^2
  CHECK(ou_mfpt_bvp(1e-6, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ou_mfpt_bvp(1e-6, 2.0, 1.0) == doctest::Approx(0.25).epsilon(1e-3));

  // (kappa, c sigma, c delta) leaves the exit time unchanged
  const double base = ou_mfpt_bvp(0.7, 1.0, 1.2);
  CHECK(ou_mfpt_bvp(0.7, 3.0, 3.6) == doctest::Approx(base).epsilon(1e-9));

  // mean reversion toward the origin slows the escape
  CHECK(ou_mfpt_bvp(2.0, 1.0, 1.0) > ou_mfpt_bvp(0.5, 1.0, 1.0));
  CHECK(ou_mfpt_bvp(0.5, 1.0, 1.0) > 1.0);
}

TEST_CASE("mc first passage agrees with the bvp oracle") {
  OuParams p;
  p.kappa = 1.0;
  p.sigma = 1.0;
  p.delta = 1.0;
  p.dt = 2.5e-4;
  p.trials = 4000;
  p.seed = 42;
  p.threads = 2;
  const auto est = ou_mfpt_mc(p);
  const double oracle = ou_mfpt_bvp(p.kappa, p.sigma, p.delta);
  CHECK(std::fabs(est.mean - oracle) / oracle < 0.05);
  CHECK(est.trials_escaped == p.trials);
  CHECK(est.ci95_halfwidth > 0.0);

  // weak barrier: near-diffusive regime, checked against the oracle only
  OuParams weak;
  weak.kappa = 0.1;
  weak.sigma = 1.0;
  weak.delta = 1.0;  // lambda = 0.1
  weak.dt = 2.5e-4;
  weak.trials = 4000;
  weak.seed = 43;
  weak.threads = 2;
  const auto west = ou_mfpt_mc(weak);
  const double woracle = ou_mfpt_bvp(weak.kappa, weak.sigma, weak.delta);
  CHECK(std::fabs(west.mean - woracle) / woracle < 0.05);
}

TEST_CASE("mc first passage: smaller barrier exits strictly sooner") {
  OuParams p;
  p.kappa = 1.0;
  p.sigma = 1.0;
  p.trials = 3000;
  p.seed = 7;
  p.threads = 2;

  p.delta = 0.6;
  p.dt = 1e-5;
  const auto small = ou_mfpt_mc(p);
  p.delta = 1.2;
  const auto big = ou_mfpt_mc(p);
  CHECK(small.mean + small.ci95_halfwidth < big.mean - big.ci95_halfwidth);
}

TEST_CASE("mc first passage: seed determinism at any thread count") {
  OuParams p;
  p.kappa = 1.0;
  p.sigma = 1.0;
  p.delta = 1.0;
  p.dt = 5e-4;
  p.trials = 500;
  p.seed = 99;

  p.threads = 1;
  const auto a = ou_mfpt_mc(p);
  const auto b = ou_mfpt_mc(p);
  p.threads = 4;
  const auto c = ou_mfpt_mc(p);
  CHECK(a.mean == b.mean);
  CHECK(a.mean == c.mean);
  CHECK(a.ci95_halfwidth == c.ci95_halfwidth);
}

TEST_CASE("renewal waiting times match the reciprocal firing rates") {
  const Prior lap = Prior::laplace(1.0);
  const double delta = kSqrt2;
  const auto est = renewal_mc(StepDist::deterministic(0.1), lap, delta, 100000, 1234);

  const double pf = phi_f(lap, delta, 0.1);
  const double pr = phi_r(lap, delta, 0.1);
  CHECK(1.0 / pf == doctest::Approx(39.11).epsilon(1e-3));
  CHECK(1.0 / pr == doctest::Approx(10.51).epsilon(1e-3));

  CHECK(std::fabs(est.mean_t_f - 1.0 / pf) < 3.0 * est.se_t_f);
  CHECK(std::fabs(est.mean_t_r - 1.0 / pr) < 3.0 * est.se_t_r);

  // ratio of waiting times equals the inverse ratio of rates, within a
  // propagated three-sigma band
  const double ratio = est.mean_t_f / est.mean_t_r;
  const double expected = pr / pf;
  const double se_ratio = ratio * std::sqrt(std::pow(est.se_t_f / est.mean_t_f, 2) +
                                            std::pow(est.se_t_r / est.mean_t_r, 2));
  CHECK(std::fabs(ratio - expected) < 3.0 * se_ratio);

  // geometric waiting times: var = (1 - p) / p^2
  const double geo = (1.0 - pf) / (pf * pf);
  CHECK(est.var_t_f == doctest::Approx(geo).epsilon(0.10));

  CHECK_THROWS_AS(renewal_mc(StepDist::deterministic(2.0), lap, delta, 10, 1),
                  std::invalid_argument);
}
