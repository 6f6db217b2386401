#include <doctest.h>

#include <cmath>
#include <cstring>

#include "kernel.hpp"
#include "quantize.hpp"
#include "rng.hpp"

using namespace szt;

namespace {
PackedTernaryTensor tensor_from_codes(const std::vector<TernaryCode>& codes,
                                      std::vector<std::int64_t> dims, double scale) {
  PackedTernaryTensor t;
  t.dims = std::move(dims);
  t.granularity = Granularity::per_layer();
  t.thresholds = {1.0};
  t.scales = {scale};
  t.payload = pack_codes(codes);
  t.validate();
  return t;
}
}  // namespace

TEST_CASE("ternary gemm: hand cases") {
  const auto row = tensor_from_codes(
      {TernaryCode::PlusOne, TernaryCode::ZeroMinus, TernaryCode::MinusOne}, {1, 3}, 1.0);
  const auto y = ternary_gemm(row, std::vector<double>{2.0, 3.0, 4.0});
  REQUIRE(y.size() == 1);
  CHECK(y[0] == -2.0);

  const auto zeros = tensor_from_codes(std::vector<TernaryCode>(6, TernaryCode::ZeroPlus), {2, 3}, 1.0);
  for (double v : ternary_gemm(zeros, std::vector<double>{1.0, 2.0, 3.0})) CHECK(v == 0.0);

  CHECK_THROWS_AS(ternary_gemm(row, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("ternary gemm: exact match with dense oracle, any thread count") {
  RandomSource rng(404);
  std::vector<double> w(32 * 64);
  for (auto& v : w) v = rng.laplace(1.0);
  LayerQuantConfig cfg;
  cfg.granularity = Granularity::per_channel(0);
  const auto t = quantize_tensor(w, {32, 64}, cfg);
  const auto codes = t.codes();

  std::vector<double> x(64);
  for (auto& v : x) v = rng.normal();

  const auto y1 = ternary_gemm(t, x, 1);
  const auto y4 = ternary_gemm(t, x, 4);
  CHECK(y1 == y4);
  // oracle: dense multiply over the numeric values, one scale at the end
  for (int i = 0; i < 32; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 64; ++j) {
      acc += double(numeric_value(codes[std::size_t(i * 64 + j)])) * x[std::size_t(j)];
    }
    CHECK(acc * t.scales[std::size_t(i)] == y1[std::size_t(i)]);
  }

  // per-channel scales along the input axis fold into x
  LayerQuantConfig cfg2;
  cfg2.granularity = Granularity::per_channel(1);
  const auto t2 = quantize_tensor(w, {32, 64}, cfg2);
  const auto dense2 = t2.decode();
  const auto y2 = ternary_gemm(t2, x, 2);
  for (int i = 0; i < 32; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 64; ++j) acc += dense2[std::size_t(i * 64 + j)] * x[std::size_t(j)];
    CHECK(acc == doctest::Approx(y2[std::size_t(i)]).epsilon(1e-12));
  }
}

TEST_CASE("stacked error variance: closed cases") {
  LinearStack stack;
  stack.weights.push_back([] {
    Matrix m(2, 2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = 1.0;
    return m;
  }());
  stack.biases.push_back({0.0, 0.0});
  CHECK(stacked_error_variance(stack, 0.1) == doctest::Approx(0.2).epsilon(1e-12));

  // two layers: ||W_1||_F^2 eps + n_out eps
  LinearStack two;
  Matrix w0(3, 2);
  w0.at(0, 0) = 1.0;
  Matrix w1(2, 3);
  w1.at(0, 0) = 2.0;  // frobenius^2 = 4
  two.weights = {w0, w1};
  two.biases = {{0.0, 0.0, 0.0}, {0.0, 0.0}};
  CHECK(stacked_error_variance(two, 0.1) == doctest::Approx(0.4 + 0.2).epsilon(1e-12));

  CHECK(stacked_error_variance(two, 0.0) == 0.0);
}

TEST_CASE("stacked error variance: formula matches monte carlo injection") {
  RandomSource rng(2025);
  LinearStack stack;
  const std::vector<std::int64_t> dims = {10, 32, 16, 8};
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix m(dims[l + 1], dims[l]);
    for (auto& v : m.a) v = rng.normal() / std::sqrt(double(dims[l]));
    stack.weights.push_back(std::move(m));
    stack.biases.emplace_back(std::size_t(dims[l + 1]), 0.25);
  }
  const double eps_var = 0.04;
  const double formula = stacked_error_variance(stack, eps_var);
  const double mc = stacked_error_variance_mc(stack, eps_var, 120000, 8, 2);
  CHECK(mc == doctest::Approx(formula).epsilon(0.05));
}

TEST_CASE("stacked snr: identical decoded forward paths") {
  RandomSource rng(606);
  LinearStack stack;
  const std::vector<std::int64_t> dims = {8, 16, 12, 4};
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix m(dims[l + 1], dims[l]);
    for (auto& v : m.a) v = rng.laplace(0.5);
    stack.weights.push_back(std::move(m));
    stack.biases.emplace_back(std::size_t(dims[l + 1]), 0.0);
  }
  const auto cmp = stacked_snr_mc(stack, 0.7, 500, 11);
  CHECK(cmp.outputs_bit_identical);
  CHECK(cmp.var_bt == cmp.var_szt);
  CHECK(cmp.var_bt > 0.0);

  // zero-weight stack: decoded weights are all zero codes, zero variance on
  // the difference of two zero outputs
  LinearStack zero;
  zero.weights.emplace_back(3, 3);
  zero.biases.push_back({0.0, 0.0, 0.0});
  const auto z = stacked_snr_mc(zero, 1.0, 100, 1);
  CHECK(z.var_bt == 0.0);
  CHECK(z.var_szt == 0.0);
}

TEST_CASE("single layer error second moment near the forward mse") {
  RandomSource rng(909);
  const double delta = std::sqrt(2.0);
  const int n = 128, m = 128;
  std::vector<double> w(std::size_t(n * m));
  for (auto& v : w) v = rng.laplace(1.0);
  double acc = 0.0;
  for (double v : w) {
    const double r = delta * numeric_value(encode_szt(v, delta));
    acc += (v - r) * (v - r);
  }
  const double second_moment = acc / double(w.size());
  CHECK(second_moment == doctest::Approx(mse_forward(Prior::laplace(1.0), delta)).epsilon(0.05));
}
