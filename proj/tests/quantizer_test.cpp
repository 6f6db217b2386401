#include <doctest.h>

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "quadrature.hpp"
#include "quantize.hpp"
#include "rng.hpp"
#include "tensor.hpp"

using namespace szt;

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;

double mse_forward_quadrature(const Prior& p, double delta) {
  const double lo = std::max(p.support_min(), -delta);
  double total = 0.0;
  if (p.support_min() < -delta) {
    total += integrate([&](double w) { const double e = w + delta; return e * e * p.pdf(w); },
                       -kInf, -delta, 1e-12);
  }
  total += integrate([&](double w) { return w * w * p.pdf(w); }, lo, delta, 1e-12);
  total += integrate([&](double w) { const double e = w - delta; return e * e * p.pdf(w); },
                     delta, kInf, 1e-12);
  return total;
}
}  // namespace

TEST_CASE("three-state encoder cases") {
  CHECK(encode_bt(1.5, 1.0) == TernaryCode::PlusOne);
  CHECK(encode_bt(-0.3, 1.0) == TernaryCode::ZeroPlus);
  CHECK(encode_bt(-1.01, 1.0) == TernaryCode::MinusOne);
  CHECK(encode_bt(1.0, 1.0) == TernaryCode::ZeroPlus);
  CHECK(encode_bt(-1.0, 1.0) == TernaryCode::ZeroPlus);
  CHECK_THROWS_AS(encode_bt(std::numeric_limits<double>::quiet_NaN(), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(encode_bt(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("four-state encoder cases") {
  CHECK(encode_szt(0.5, 1.0) == TernaryCode::ZeroPlus);
  CHECK(encode_szt(-0.3, 1.0) == TernaryCode::ZeroMinus);
  CHECK(encode_szt(0.0, 1.0) == TernaryCode::ZeroPlus);
  CHECK(encode_szt(-0.0, 1.0) == TernaryCode::ZeroPlus);
  CHECK(encode_szt(1.0, 1.0) == TernaryCode::ZeroPlus);
  CHECK(encode_szt(-1.0, 1.0) == TernaryCode::ZeroMinus);
  CHECK(encode_szt(1.0000001, 1.0) == TernaryCode::PlusOne);
  CHECK(encode_szt(-1.0000001, 1.0) == TernaryCode::MinusOne);
  CHECK_THROWS_AS(encode_szt(std::numeric_limits<double>::infinity(), 1.0), std::invalid_argument);
}

TEST_CASE("activation encoder with asymmetric thresholds") {
  CHECK(encode_szt_activation(0.4, 0.5, 0.5) == TernaryCode::ZeroPlus);
  CHECK(encode_szt_activation(-0.1, 0.5, 0.5) == TernaryCode::ZeroMinus);
  CHECK(encode_szt_activation(0.6, 0.5, 0.5) == TernaryCode::PlusOne);
  CHECK(encode_szt_activation(-0.3, 0.5, 0.2) == TernaryCode::MinusOne);
  CHECK(encode_szt_activation(0.0, 0.5, 0.5) == TernaryCode::ZeroPlus);
}

TEST_CASE("forward identity: four-state decodes exactly like three-state") {
  RandomSource rng(2024);
  const double delta = 1.0;
  for (int i = 0; i < 1000000; ++i) {
    const double w = rng.uniform(-3.0, 3.0);
    CHECK(numeric_value(encode_szt(w, delta)) == numeric_value(encode_bt(w, delta)));
  }
  const double eps = 1e-12;
  for (double w : {-delta, -delta - eps, -delta + eps, 0.0, eps, -eps, delta, delta - eps, delta + eps}) {
    CHECK(numeric_value(encode_szt(w, delta)) == numeric_value(encode_bt(w, delta)));
  }
}

TEST_CASE("forward mse: laplace closed form and limits") {
  const Prior lap = Prior::laplace(1.0);
  const double at_opt = mse_forward(lap, kSqrt2);
  // closed form evaluated independently
  const double expected = 2.0 - std::exp(-kSqrt2) * (2.0 * kSqrt2 + 2.0);
  CHECK(at_opt == doctest::Approx(expected).epsilon(1e-12));
  CHECK(at_opt == doctest::Approx(0.8261285).epsilon(1e-4));
  CHECK(at_opt == doctest::Approx(mse_forward_quadrature(lap, kSqrt2)).epsilon(1e-8));

  // tiny threshold: everything clips to zero, error approaches the variance
  CHECK(mse_forward(lap, 1e-6) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(mse_forward(Prior::gaussian(1.0), 1e-6) == doctest::Approx(1.0).epsilon(1e-4));

  // distribution-independent bound at k = 1
  const double sigma_sq = 2.0;
  CHECK(at_opt <= sigma_sq / 2.0);
}

TEST_CASE("forward mse: gaussian quadrature matches the erf expression") {
  const Prior g = Prior::gaussian(1.0);
  for (double d : {0.5, 0.88, 1.3}) {
    const double phi = std::exp(-0.5 * d * d) / std::sqrt(2.0 * 3.14159265358979323846);
    const double q = 0.5 * std::erfc(d / kSqrt2);
    const double closed = 1.0 - 4.0 * d * phi + 2.0 * d * d * q;
    CHECK(mse_forward(g, d) == doctest::Approx(closed).epsilon(1e-8));
  }
}

TEST_CASE("mse equality between encoders on a sampled population") {
  RandomSource rng(9);
  const Prior lap = Prior::laplace(0.8);
  const double delta = 1.1;
  double bt_acc = 0.0, szt_acc = 0.0;
  for (int i = 0; i < 50000; ++i) {
    const double w = lap.sample(rng);
    const double rb = delta * numeric_value(encode_bt(w, delta));
    const double rs = delta * numeric_value(encode_szt(w, delta));
    bt_acc += (w - rb) * (w - rb);
    szt_acc += (w - rs) * (w - rs);
  }
  CHECK(bt_acc == szt_acc);  // bitwise: identical decoded values
}

TEST_CASE("optimal threshold: closed form, minimizer, equivariance") {
  CHECK(optimal_threshold(Prior::laplace(1.0)) == doctest::Approx(kSqrt2).epsilon(1e-9));
  CHECK(optimal_threshold(Prior::laplace(2.0)) == doctest::Approx(2.0 * kSqrt2).epsilon(1e-9));

  const Prior g = Prior::gaussian(1.0);
  const double dg = optimal_threshold(g);
  CHECK(dg == doctest::Approx(0.88).epsilon(0.0115));
  // derivative sign change around the minimizer
  CHECK(mse_forward(g, dg - 0.02) > mse_forward(g, dg));
  CHECK(mse_forward(g, dg + 0.02) > mse_forward(g, dg));

  // grid optimality
  const double fmin = mse_forward(g, dg);
  for (int i = 1; i <= 100; ++i) {
    const double d = 4.0 * double(i) / 100.0;
    CHECK(mse_forward(g, d) >= fmin - 1e-12);
  }

  // scale equivariance for the minimized kinds too
  CHECK(optimal_threshold(Prior::gaussian(2.5)) == doctest::Approx(2.5 * dg).epsilon(1e-6));

  CHECK_THROWS_AS(optimal_threshold(Prior::empirical({0.0, 1.0, 2.0})), UnsupportedError);
}

TEST_CASE("laplace optimum: derivative sign change at sqrt(2) b") {
  const Prior lap = Prior::laplace(1.0);
  const double h = 1e-4;
  const double left = (mse_forward(lap, kSqrt2 - h) - mse_forward(lap, kSqrt2 - 2 * h)) / h;
  const double right = (mse_forward(lap, kSqrt2 + 2 * h) - mse_forward(lap, kSqrt2 + h)) / h;
  CHECK(left < 0.0);
  CHECK(right > 0.0);
}

TEST_CASE("half-line priors share the symmetric optimum") {
  // The one-sided optimum coincides with the symmetric one: the integrand
  // is the same on the support. Documented behavior, also exercised by the
  // acceptance suite against the quoted constants.
  const double d_half_gauss = optimal_threshold(Prior::half_gaussian(1.0));
  CHECK(d_half_gauss == doctest::Approx(optimal_threshold(Prior::gaussian(1.0))).epsilon(1e-6));
  const double d_half_lap = optimal_threshold(Prior::half_laplace(1.0));
  CHECK(d_half_lap == doctest::Approx(kSqrt2).epsilon(1e-6));
}

TEST_CASE("calibrate: sigma rule and prior-optimal rule") {
  // sample std exactly 1 and a known quantization pattern
  const std::vector<double> w = {1.0, -1.0, 1.0 / kSqrt2, -1.0 / kSqrt2};
  const auto cal = calibrate(w, ThresholdRule::sigma());
  CHECK(cal.delta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cal.k == 1.0);
  CHECK(cal.forward_mse >= 0.0);

  const auto copt = calibrate({}, ThresholdRule::prior_optimal(Prior::laplace(1.0)));
  CHECK(copt.delta == doctest::Approx(kSqrt2).epsilon(1e-9));
  CHECK(copt.k == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(copt.forward_mse == doctest::Approx(mse_forward(Prior::laplace(1.0), kSqrt2)).epsilon(1e-12));

  const auto gopt = calibrate({}, ThresholdRule::prior_optimal(Prior::gaussian(1.0)));
  CHECK(gopt.k == doctest::Approx(0.88).epsilon(0.0115));

  CHECK_THROWS_AS(calibrate(std::vector<double>{1.0, 1.0, 1.0}, ThresholdRule::sigma()), CalibrationError);
  CHECK_THROWS_AS(calibrate(std::vector<double>{1.0}, ThresholdRule::sigma()), CalibrationError);
}

TEST_CASE("quantize_tensor: per-layer") {
  // fixed k chosen so the threshold is exactly 1.0
  const std::vector<double> w = {0.5, -0.3, 1.5, -1.01};
  const double sd = sample_std(w);
  LayerQuantConfig cfg;
  cfg.threshold_rule = ThresholdRule::fixed_k(1.0 / sd);
  const auto t = quantize_tensor(w, {4}, cfg);
  REQUIRE(t.thresholds.size() == 1);
  CHECK(t.thresholds[0] == doctest::Approx(1.0).epsilon(1e-12));
  const auto codes = t.codes();
  CHECK(codes[0] == TernaryCode::ZeroPlus);
  CHECK(codes[1] == TernaryCode::ZeroMinus);
  CHECK(codes[2] == TernaryCode::PlusOne);
  CHECK(codes[3] == TernaryCode::MinusOne);
  CHECK(t.scales[0] == t.thresholds[0]);  // EqualThreshold default

  // sigma rule on a large normal sample lands near 1
  RandomSource rng(31);
  std::vector<double> big(100000);
  for (auto& v : big) v = rng.normal();
  LayerQuantConfig cfg2;
  const auto t2 = quantize_tensor(big, {100000}, cfg2);
  CHECK(t2.thresholds[0] == doctest::Approx(sample_std(big)).epsilon(1e-12));
  CHECK(std::fabs(t2.thresholds[0] - 1.0) < 0.02);
}

TEST_CASE("quantize_tensor: per-channel thresholds follow each slice") {
  // rows with sample std exactly s and 2s
  const double a = 1.0, b = 1.0 / kSqrt2;
  std::vector<double> w = {a, -a, b, -b, 2 * a, -2 * a, 2 * b, -2 * b};
  LayerQuantConfig cfg;
  cfg.granularity = Granularity::per_channel(0);
  const auto t = quantize_tensor(w, {2, 4}, cfg);
  REQUIRE(t.thresholds.size() == 2);
  CHECK(t.thresholds[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.thresholds[1] == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(quantize_tensor(w, {2, 4},
                                  [] {
                                    LayerQuantConfig c;
                                    c.granularity = Granularity::per_channel(5);
                                    return c;
                                  }()),
                  std::invalid_argument);
  CHECK_THROWS_AS(quantize_tensor(std::vector<double>{}, {0}, cfg), std::invalid_argument);
}

TEST_CASE("container format: roundtrip and bad input") {
  std::vector<double> w(60);
  RandomSource rng(5);
  for (auto& v : w) v = rng.laplace(1.0);
  LayerQuantConfig cfg;
  cfg.granularity = Granularity::per_channel(1);
  const auto t = quantize_tensor(w, {5, 4, 3}, cfg);
  save_szt(t, "tensor_roundtrip.szt");
  const auto back = load_szt("tensor_roundtrip.szt");
  CHECK(back.dims == t.dims);
  CHECK(back.granularity.axis == 1);
  CHECK(back.thresholds == t.thresholds);
  CHECK(back.scales == t.scales);
  CHECK(back.payload == t.payload);

  CHECK_THROWS_AS(load_szt("does_not_exist.szt"), IoError);
}

TEST_CASE("dense f32 tensor io with sidecar") {
  DenseTensor d;
  d.dims = {2, 3};
  d.values = {1.f, -2.f, 0.25f, 0.f, 5.f, -0.5f};
  save_f32_tensor(d, "weights_test.bin");
  const auto back = load_f32_tensor("weights_test.bin");
  CHECK(back.dims == d.dims);
  CHECK(back.values == d.values);
}

TEST_CASE("empirical prior basics") {
  RandomSource rng(77);
  std::vector<double> xs(20000);
  for (auto& v : xs) v = rng.normal() * 2.0;
  const Prior e = Prior::empirical(xs);
  CHECK(e.std_dev() == doctest::Approx(2.0).epsilon(0.05));
  CHECK(e.mass_within(2.0) == doctest::Approx(0.6827).epsilon(0.02));
  CHECK(e.pdf(0.0) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0 * 3.14159265))).epsilon(0.15));
  CHECK(mse_forward(e, 2.0) == doctest::Approx(mse_forward(Prior::gaussian(2.0), 2.0)).epsilon(0.05));
  CHECK_THROWS_AS(Prior::empirical({1.0, 1.0}), std::invalid_argument);
}
