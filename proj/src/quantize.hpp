#pragma once

#include <memory>
#include <span>
#include <vector>

#include "codes.hpp"
#include "prior.hpp"
#include "tensor.hpp"

namespace szt {

// Three-level encoder with one zero state; never emits ZeroMinus.
// w > delta -> +1, |w| <= delta -> 0 (stored as the ZeroPlus pattern),
// w < -delta -> -1. Throws std::invalid_argument on non-finite w.
TernaryCode encode_bt(double w, double delta);

// Four-state encoder: w > delta -> +1, 0 < w <= delta -> 0+,
// -delta <= w < 0 -> 0-, w < -delta -> -1. w == 0 ties to 0+ so the
// encoder stays a deterministic function of the latent value.
TernaryCode encode_szt(double w, double delta);

// Asymmetric-threshold variant for activations (one-sided distributions).
TernaryCode encode_szt_activation(double u, double delta_pos, double delta_neg);

// How the per-layer or per-channel threshold is chosen.
struct ThresholdRule {
  enum class Kind { Sigma, FixedK, PriorOptimal };
  Kind kind = Kind::Sigma;
  double k = 1.0;                   // FixedK: delta = k * sample sigma
  std::shared_ptr<Prior> prior;     // PriorOptimal

  static ThresholdRule sigma() { return {Kind::Sigma, 1.0, nullptr}; }
  static ThresholdRule fixed_k(double k);
  static ThresholdRule prior_optimal(Prior p);
  const char* name() const;
};

struct LayerQuantConfig {
  Granularity granularity = Granularity::per_layer();
  ThresholdRule threshold_rule = ThresholdRule::sigma();
  enum class ScaleRule { Unit, EqualThreshold };
  ScaleRule scale_rule = ScaleRule::EqualThreshold;
  // Zero ties always break toward ZeroPlus; kept explicit for the record.
  enum class ZeroTiebreak { ToZeroPlus };
  ZeroTiebreak zero_tiebreak = ZeroTiebreak::ToZeroPlus;
};

struct CalibrationResult {
  double delta = 0.0;        // threshold, weight units
  double k = 0.0;            // delta / sigma of the calibrated population
  double forward_mse = 0.0;  // expected squared reconstruction error
};

// Unbiased (n-1) sample standard deviation; throws CalibrationError when the
// population is degenerate (fewer than 2 samples or zero variance).
double sample_std(std::span<const double> xs);

// Expected squared error of decode levels {-delta, 0, +delta} under `prior`:
//   integral of (w - delta * numeric(encode_szt(w, delta)))^2 p(w) dw.
// Laplace uses the closed form 2 b^2 - exp(-delta/b) (2 b delta + delta^2);
// other kinds use adaptive quadrature (rel tol 1e-8 or better). Empirical
// priors average over their samples.
double mse_forward(const Prior& prior, double delta);

// MSE-minimizing threshold. Laplace has the closed form sqrt(2) * b; the
// other parametric kinds minimize mse_forward over (0, 4 sigma] to an
// absolute x-tolerance of about 1e-6 * sigma. Empirical priors are not
// supported (calibrate with the sigma rule instead).
double optimal_threshold(const Prior& prior);

// Threshold calibration for a weight population (sigma / fixed-k rules) or
// a parametric prior (prior-optimal rule).
CalibrationResult calibrate(std::span<const double> weights, const ThresholdRule& rule);

// Quantizes a dense tensor to the packed four-state format. Per-layer mode
// derives one threshold from all weights; per-channel derives one per slice
// along the configured axis. Scales are 1 (Unit) or the threshold itself
// (EqualThreshold).
PackedTernaryTensor quantize_tensor(const DenseTensor& weights, const LayerQuantConfig& config);
PackedTernaryTensor quantize_tensor(std::span<const double> weights,
                                    const std::vector<std::int64_t>& dims,
                                    const LayerQuantConfig& config);

}  // namespace szt
