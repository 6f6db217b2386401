#include "kernel.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "quantize.hpp"
#include "rng.hpp"

namespace szt {

double Matrix::frobenius_sq() const {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols != rhs.rows) throw std::invalid_argument("matmul shape mismatch");
  Matrix out(lhs.rows, rhs.cols);
  for (std::int64_t i = 0; i < lhs.rows; ++i) {
    for (std::int64_t k = 0; k < lhs.cols; ++k) {
      const double v = lhs.at(i, k);
      if (v == 0.0) continue;
      for (std::int64_t j = 0; j < rhs.cols; ++j) {
        out.at(i, j) += v * rhs.at(k, j);
      }
    }
  }
  return out;
}

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  if (m.cols != static_cast<std::int64_t>(x.size())) {
    throw std::invalid_argument("matrix-vector shape mismatch");
  }
  std::vector<double> y(std::size_t(m.rows), 0.0);
  for (std::int64_t i = 0; i < m.rows; ++i) {
    double acc = 0.0;
    for (std::int64_t j = 0; j < m.cols; ++j) acc += m.at(i, j) * x[std::size_t(j)];
    y[std::size_t(i)] = acc;
  }
  return y;
}

void LinearStack::validate() const {
  if (weights.size() != biases.size()) {
    throw std::invalid_argument("stack needs one bias vector per weight matrix");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (static_cast<std::int64_t>(biases[l].size()) != weights[l].rows) {
      throw std::invalid_argument("bias length must match layer output size");
    }
    if (l + 1 < weights.size() && weights[l + 1].cols != weights[l].rows) {
      throw std::invalid_argument("adjacent layer dimensions are incompatible");
    }
  }
}

std::vector<double> LinearStack::forward(std::span<const double> x) const {
  std::vector<double> h(x.begin(), x.end());
  for (std::size_t l = 0; l < weights.size(); ++l) {
    h = matvec(weights[l], h);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += biases[l][i];
  }
  return h;
}

std::vector<double> ternary_gemm(const PackedTernaryTensor& mat,
                                 std::span<const double> x, int threads) {
  if (mat.dims.size() != 2) throw std::invalid_argument("ternary_gemm needs a rank-2 tensor");
  const std::int64_t rows = mat.dims[0];
  const std::int64_t cols = mat.dims[1];
  if (cols != static_cast<std::int64_t>(x.size())) {
    throw std::invalid_argument("ternary_gemm shape mismatch");
  }
  const auto codes = mat.codes();

  const bool col_scaled = !mat.granularity.per_layer_mode() && mat.granularity.axis == 1;
  std::vector<double> xin(x.begin(), x.end());
  if (col_scaled) {
    for (std::int64_t j = 0; j < cols; ++j) xin[std::size_t(j)] *= mat.scales[std::size_t(j)];
  }

  std::vector<double> y(std::size_t(rows), 0.0);
  const auto run_rows = [&](std::int64_t r0, std::int64_t r1) {
    for (std::int64_t i = r0; i < r1; ++i) {
      double acc = 0.0;
      const std::size_t base = std::size_t(i * cols);
      for (std::int64_t j = 0; j < cols; ++j) {
        switch (numeric_value(codes[base + std::size_t(j)])) {
          case 1: acc += xin[std::size_t(j)]; break;
          case -1: acc -= xin[std::size_t(j)]; break;
          default: break;
        }
      }
      if (!col_scaled) {
        acc *= mat.granularity.per_layer_mode() ? mat.scales[0] : mat.scales[std::size_t(i)];
      }
      y[std::size_t(i)] = acc;
    }
  };

  if (threads <= 1 || rows < 2 * threads) {
    run_rows(0, rows);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::int64_t r0 = t * chunk;
      const std::int64_t r1 = std::min<std::int64_t>(rows, r0 + chunk);
      if (r0 >= r1) break;
      pool.emplace_back(run_rows, r0, r1);
    }
    for (auto& th : pool) th.join();
  }
  return y;
}

double stacked_error_variance(const LinearStack& stack, double eps_var) {
  if (eps_var < 0.0) throw std::invalid_argument("error variance must be >= 0");
  stack.validate();
  const std::size_t depth = stack.depth();
  if (depth == 0) return 0.0;
  // suffix product over layers after the injection point
  double total = double(stack.weights.back().rows);  // empty product term
  Matrix suffix;
  bool have = false;
  for (std::size_t l = depth - 1; l-- > 0;) {
    const Matrix& w_next = stack.weights[l + 1];
    suffix = have ? matmul(suffix, w_next) : w_next;
    have = true;
    total += suffix.frobenius_sq();
  }
  return total * eps_var;
}

double stacked_error_variance_mc(const LinearStack& stack, double eps_var,
                                 std::int64_t trials, std::uint64_t seed,
                                 int threads) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  stack.validate();
  const double sd = std::sqrt(eps_var);
  const RandomSource root(seed);

  std::vector<double> per_trial(std::size_t(trials), 0.0);
  const auto run = [&](std::int64_t t0, std::int64_t t1) {
    for (std::int64_t t = t0; t < t1; ++t) {
      RandomSource rng = root.split(std::uint64_t(t));
      std::vector<double> x(static_cast<std::size_t>(stack.weights[0].cols));
      for (auto& v : x) v = rng.normal();
      std::vector<double> clean = x, noisy = x;
      for (std::size_t l = 0; l < stack.depth(); ++l) {
        clean = matvec(stack.weights[l], clean);
        noisy = matvec(stack.weights[l], noisy);
        for (std::size_t i = 0; i < clean.size(); ++i) {
          clean[i] += stack.biases[l][i];
          noisy[i] += stack.biases[l][i] + sd * rng.normal();
        }
      }
      double e = 0.0;
      for (std::size_t i = 0; i < clean.size(); ++i) {
        const double d = clean[i] - noisy[i];
        e += d * d;
      }
      per_trial[std::size_t(t)] = e;
    }
  };

  if (threads <= 1) {
    run(0, trials);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (trials + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::int64_t a = t * chunk;
      const std::int64_t b = std::min<std::int64_t>(trials, a + chunk);
      if (a >= b) break;
      pool.emplace_back(run, a, b);
    }
    for (auto& th : pool) th.join();
  }
  double acc = 0.0;
  for (double v : per_trial) acc += v;  // fixed trial order
  return acc / double(trials);
}

SnrComparison stacked_snr_mc(const LinearStack& stack, double delta,
                             std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  stack.validate();
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");

  LinearStack bt = stack, szt_q = stack;
  bool identical = true;
  for (std::size_t l = 0; l < stack.depth(); ++l) {
    const Matrix& w = stack.weights[l];
    for (std::size_t i = 0; i < w.a.size(); ++i) {
      const double wb = delta * numeric_value(encode_bt(w.a[i], delta));
      const double ws = delta * numeric_value(encode_szt(w.a[i], delta));
      bt.weights[l].a[i] = wb;
      szt_q.weights[l].a[i] = ws;
      identical = identical && std::memcmp(&wb, &ws, sizeof(double)) == 0;
    }
  }

  SnrComparison out;
  RandomSource root(seed);
  double acc_bt = 0.0, acc_szt = 0.0;
  bool outputs_equal = true;
  for (std::int64_t t = 0; t < trials; ++t) {
    RandomSource rng = root.split(std::uint64_t(t));
    std::vector<double> x(static_cast<std::size_t>(stack.weights[0].cols));
    for (auto& v : x) v = rng.normal();
    const auto y = stack.forward(x);
    const auto yb = bt.forward(x);
    const auto ys = szt_q.forward(x);
    for (std::size_t i = 0; i < y.size(); ++i) {
      acc_bt += (y[i] - yb[i]) * (y[i] - yb[i]);
      acc_szt += (y[i] - ys[i]) * (y[i] - ys[i]);
      outputs_equal = outputs_equal && std::memcmp(&yb[i], &ys[i], sizeof(double)) == 0;
    }
  }
  out.var_bt = acc_bt / double(trials);
  out.var_szt = acc_szt / double(trials);
  out.outputs_bit_identical = identical && outputs_equal;
  return out;
}

}  // namespace szt
