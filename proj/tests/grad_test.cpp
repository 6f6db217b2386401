#include <doctest.h>

#include <cmath>

#include "grad.hpp"
#include "quadrature.hpp"
#include "quantize.hpp"

using namespace szt;

TEST_CASE("ste backward: sign modulation inside the dead zone") {
  const std::vector<double> g = {2.0};

  auto out = ste_backward(SteKind::SZT, -0.3, 1.0, TernaryCode::ZeroMinus, g);
  CHECK(out == std::vector<double>{-2.0});

  out = ste_backward(SteKind::SZT, 1.5, 1.0, TernaryCode::PlusOne, g);
  CHECK(out == std::vector<double>{2.0});

  out = ste_backward(SteKind::BT, 0.1, 1.0, TernaryCode::ZeroPlus, g);
  CHECK(out == std::vector<double>{2.0});

  RandomSource rng(1);
  out = ste_backward(SteKind::SR, 0.1, 1.0, TernaryCode::ZeroPlus, g, &rng);
  CHECK(out == std::vector<double>{2.0});
  CHECK_THROWS_AS(ste_backward(SteKind::SR, 0.1, 1.0, TernaryCode::ZeroPlus, g, nullptr),
                  std::invalid_argument);

  // deterministic kinds are bit-stable across repeated calls
  const std::vector<double> g3 = {0.25, -1.5, 3.0};
  const auto a = ste_backward(SteKind::SZT, -0.7, 1.0, TernaryCode::ZeroMinus, g3);
  const auto b = ste_backward(SteKind::SZT, -0.7, 1.0, TernaryCode::ZeroMinus, g3);
  CHECK(a == b);
}

TEST_CASE("sr_round: boundary cases and distance weighting") {
  RandomSource rng(99);
  CHECK(sr_round(0.0, 1.0, rng) == TernaryCode::ZeroPlus);
  for (int i = 0; i < 50; ++i) {
    CHECK(sr_round(1.0, 1.0, rng) == TernaryCode::PlusOne);
    CHECK(sr_round(-1.0, 1.0, rng) == TernaryCode::MinusOne);
    CHECK(sr_round(1.7, 1.0, rng) == TernaryCode::PlusOne);
    CHECK(sr_round(-1.7, 1.0, rng) == TernaryCode::MinusOne);
  }
  // never the signed-zero pattern
  for (int i = 0; i < 20000; ++i) {
    CHECK(sr_round(-0.4, 1.0, rng) != TernaryCode::ZeroMinus);
  }

  int plus = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    if (sr_round(0.25, 1.0, rng) == TernaryCode::PlusOne) ++plus;
  }
  const double p = double(plus) / n;
  const double se = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::fabs(p - 0.25) < 3.0 * se);
}

TEST_CASE("sr forward unbiasedness") {
  RandomSource rng(1234);
  for (double w : {-0.9, -0.5, -0.1, 0.2, 0.6, 0.95}) {
    const int n = 100000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += numeric_value(sr_round(w, 1.0, rng));
    const double mean = acc / n;
    const double p = std::fabs(w);
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::fabs(mean - w) < 3.0 * se + 1e-12);
  }
}

TEST_CASE("bias and variance bounds") {
  CHECK(bias_bound(SteKind::SZT, 0.5, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(bias_bound(SteKind::BT, 0.5, 1.0, 3.0) == doctest::Approx(3.0));
  CHECK(bias_bound(SteKind::SR, 0.7, 1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(bias_bound(SteKind::SZT, 1.5, 1.0, 1.0), std::domain_error);

  CHECK(variance_bound(SteKind::SR, 1.0, 2.0) == doctest::Approx(1.0));
  CHECK(variance_bound(SteKind::SZT, 1.0, 2.0) == 0.0);
  CHECK(variance_bound(SteKind::BT, 0.5, 1.0) == 0.0);

  // bound-level ordering on the dead-zone grid
  for (double w = 0.01; w < 0.495; w += 0.02) {
    const auto mse = [&](SteKind k) {
      const double b = bias_bound(k, w, 1.0, 1.0);
      return b * b + variance_bound(k, 1.0, 1.0);
    };
    CHECK(mse(SteKind::SZT) < mse(SteKind::SR));
    CHECK(mse(SteKind::SR) < mse(SteKind::BT));
  }

  // linearity of the four-state bias bound
  for (double w = 0.0; w <= 1.0; w += 0.125) {
    CHECK(bias_bound(SteKind::SZT, w, 1.0, 2.0) == doctest::Approx(2.0 * w));
  }
}

TEST_CASE("mse monte carlo: deterministic kinds have zero variance") {
  const std::vector<double> g = {1.0};
  const auto szt_rep = mse_estimate_mc(SteKind::SZT, 0.4, 1.0, g, 10000, 5);
  CHECK(szt_rep.variance == 0.0);
  CHECK(szt_rep.mse == doctest::Approx(0.16).epsilon(1e-12));

  const auto bt_rep = mse_estimate_mc(SteKind::BT, 0.4, 1.0, g, 1, 5);
  CHECK(bt_rep.mse == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bt_rep.variance == 0.0);
}

TEST_CASE("mse monte carlo: sr variance bounded by the quarter rule") {
  const std::vector<double> g = {1.0};
  const auto rep = mse_estimate_mc(SteKind::SR, 0.5, 1.0, g, 100000, 17);
  CHECK(rep.variance <= 0.25 + 3.0 * rep.variance_se + 1e-12);
  CHECK(rep.variance == doctest::Approx(0.25).epsilon(0.05));
  CHECK(rep.bias_sq < 9.0 * rep.bias_se * rep.bias_se + 1e-6);
}

TEST_CASE("measured mse ordering inside half the dead zone") {
  const std::vector<double> g = {1.0};
  for (double w = 0.01; w < 0.495; w += 0.04) {
    const auto s = mse_estimate_mc(SteKind::SZT, w, 1.0, g, 2000, 3);
    const auto r = mse_estimate_mc(SteKind::SR, w, 1.0, g, 100000, 3);
    const auto b = mse_estimate_mc(SteKind::BT, w, 1.0, g, 2000, 3);
    CHECK(s.mse < r.mse);
    CHECK(r.mse < b.mse);
  }
}

TEST_CASE("average dead-zone second moment at the default threshold") {
  const Prior lap = Prior::laplace(1.0);
  const Prior gauss = Prior::gaussian(1.0);
  CHECK(avg_dead_zone_mse(lap, 1.0) == doctest::Approx(0.225).epsilon(0.0045));
  CHECK(avg_dead_zone_mse(gauss, 1.0) == doctest::Approx(0.291).epsilon(0.0035));
  CHECK(std::fabs(avg_dead_zone_mse(gauss, 1.0) - avg_dead_zone_mse_quadrature(gauss, 1.0)) < 1e-6);
  CHECK(std::fabs(avg_dead_zone_mse(lap, 1.0) - avg_dead_zone_mse_quadrature(lap, 1.0)) < 1e-6);
  // generic quadrature path
  CHECK(avg_dead_zone_mse(Prior::half_laplace(1.0), 1.0) > 0.0);
}

TEST_CASE("momentum trajectories") {
  // no gradient: geometric decay of the squared magnitude
  std::vector<double> zeros(200, 0.0);
  const auto bt = momentum_simulate(SteKind::BT, 0.9, 1.0, zeros);
  CHECK(bt.back() == doctest::Approx(std::pow(0.81, 200)).epsilon(1e-9));
  for (std::size_t i = 1; i < bt.size(); ++i) CHECK(bt[i] < bt[i - 1]);

  // constant aligned gradient approaches (1/(1-beta))^2 and clears the
  // retention floor 1/(1-beta^2)
  std::vector<double> ones(500, 1.0);
  const auto szt_traj = momentum_simulate(SteKind::SZT, 0.9, 0.0, ones);
  CHECK(szt_traj.back() == doctest::Approx(100.0).epsilon(1e-4));
  CHECK(szt_traj.back() >= 1.0 / (1.0 - 0.81));

  // zero gradient edge for the four-state rule
  const auto szt_zero = momentum_simulate(SteKind::SZT, 0.5, 1.0, zeros);
  CHECK(szt_zero.back() < 1e-30);

  CHECK_THROWS_AS(momentum_simulate(SteKind::BT, 1.0, 1.0, ones), std::invalid_argument);
}
