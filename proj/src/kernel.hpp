#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tensor.hpp"

namespace szt {

// Small dense row-major matrix; enough for desk-scale stacks and toy nets.
struct Matrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::int64_t r, std::int64_t c) : rows(r), cols(c), a(std::size_t(r * c), 0.0) {}
  double& at(std::int64_t i, std::int64_t j) { return a[std::size_t(i * cols + j)]; }
  double at(std::int64_t i, std::int64_t j) const { return a[std::size_t(i * cols + j)]; }
  double frobenius_sq() const;
};

Matrix matmul(const Matrix& lhs, const Matrix& rhs);
std::vector<double> matvec(const Matrix& m, std::span<const double> x);

// Affine layers x_{l+1} = W_l x_l + b_l with compatible adjacent dimensions.
struct LinearStack {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  std::size_t depth() const { return weights.size(); }
  void validate() const;
  std::vector<double> forward(std::span<const double> x) const;
};

// y_i = scale_i * sum_j numeric(code_ij) x_j for a rank-2 packed tensor,
// accumulated with adds/subtracts only (one scale multiply per output).
// Per-channel scales on axis 0 scale rows; axis 1 scales fold into x.
// threads > 1 splits output rows; accumulation order per row is fixed, so
// results are identical for every thread count.
std::vector<double> ternary_gemm(const PackedTernaryTensor& mat,
                                 std::span<const double> x, int threads = 1);

// Output error variance sum_l ||W_{L-1} ... W_{l+1}||_F^2 eps_var for
// independent zero-mean per-coordinate noise of variance eps_var injected at
// every layer output. The empty suffix product contributes n_out.
double stacked_error_variance(const LinearStack& stack, double eps_var);

// Monte Carlo counterpart: injects independent noise at each layer output
// and measures E||x_L - x~_L||^2 over `trials` random inputs.
double stacked_error_variance_mc(const LinearStack& stack, double eps_var,
                                 std::int64_t trials, std::uint64_t seed,
                                 int threads = 1);

struct SnrComparison {
  double var_bt = 0.0;
  double var_szt = 0.0;
  bool outputs_bit_identical = false;
};

// Quantizes every layer of `stack` with a fixed threshold under the
// three-state and four-state encoders (scale = delta), then propagates
// `trials` random normal inputs and reports the output reconstruction-error
// variances of both against the full-precision stack.
SnrComparison stacked_snr_mc(const LinearStack& stack, double delta,
                             std::int64_t trials, std::uint64_t seed);

}  // namespace szt
