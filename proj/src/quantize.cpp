#include "quantize.hpp"

#include <cmath>
#include <stdexcept>

#include "errors.hpp"
#include "quadrature.hpp"

namespace szt {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("threshold must be positive and finite");
  }
}

void check_finite(double w, const char* what) {
  if (!std::isfinite(w)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

TernaryCode encode_bt(double w, double delta) {
  check_delta(delta);
  check_finite(w, "weight");
  if (w > delta) return TernaryCode::PlusOne;
  if (w < -delta) return TernaryCode::MinusOne;
  return TernaryCode::ZeroPlus;
}

TernaryCode encode_szt(double w, double delta) {
  check_delta(delta);
  check_finite(w, "weight");
  if (w > delta) return TernaryCode::PlusOne;
  if (w < -delta) return TernaryCode::MinusOne;
  if (w < 0.0) return TernaryCode::ZeroMinus;
  return TernaryCode::ZeroPlus;  // includes the w == 0 tie
}

TernaryCode encode_szt_activation(double u, double delta_pos, double delta_neg) {
  check_delta(delta_pos);
  check_delta(delta_neg);
  check_finite(u, "activation");
  if (u > delta_pos) return TernaryCode::PlusOne;
  if (u < -delta_neg) return TernaryCode::MinusOne;
  if (u < 0.0) return TernaryCode::ZeroMinus;
  return TernaryCode::ZeroPlus;
}

ThresholdRule ThresholdRule::fixed_k(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("fixed-k rule needs k > 0");
  return {Kind::FixedK, k, nullptr};
}

ThresholdRule ThresholdRule::prior_optimal(Prior p) {
  return {Kind::PriorOptimal, 1.0, std::make_shared<Prior>(std::move(p))};
}

const char* ThresholdRule::name() const {
  switch (kind) {
    case Kind::Sigma: return "sigma";
    case Kind::FixedK: return "fixed_k";
    case Kind::PriorOptimal: return "prior_optimal";
  }
  return "?";
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) {
    throw CalibrationError("sigma rule needs at least 2 samples");
  }
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= double(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / double(xs.size() - 1));
  if (!(sd > 0.0)) {
    throw CalibrationError("population has zero variance; threshold would be 0");
  }
  return sd;
}

double mse_forward(const Prior& prior, double delta) {
  check_delta(delta);
  if (prior.kind() == Prior::Kind::Laplace) {
    const double b = prior.param();
    return 2.0 * b * b - std::exp(-delta / b) * (2.0 * b * delta + delta * delta);
  }
  if (prior.kind() == Prior::Kind::Empirical) {
    double acc = 0.0;
    for (double w : prior.samples()) {
      const double r = delta * numeric_value(encode_szt(w, delta));
      acc += (w - r) * (w - r);
    }
    return acc / double(prior.samples().size());
  }
  // Piecewise quadrature; the integrand is smooth inside each piece.
  const double lo = prior.support_min();
  const auto pdf = [&prior](double w) { return prior.pdf(w); };
  double total = 0.0;
  if (lo < -delta) {
    total += integrate([&](double w) { const double e = w + delta; return e * e * pdf(w); },
                       -kInf, -delta, 1e-10);
  }
  const double zlo = std::max(lo, -delta);
  total += integrate([&](double w) { return w * w * pdf(w); }, zlo, delta, 1e-10);
  total += integrate([&](double w) { const double e = w - delta; return e * e * pdf(w); },
                     delta, kInf, 1e-10);
  return total;
}

double optimal_threshold(const Prior& prior) {
  switch (prior.kind()) {
    case Prior::Kind::Laplace:
      return std::sqrt(2.0) * prior.param();
    case Prior::Kind::Empirical:
      throw UnsupportedError(
          "optimal_threshold needs a parametric prior; calibrate empirical "
          "data with the sigma rule");
    default: {
      const double sigma = prior.std_dev();
      const auto [dmin, fmin] = minimize_scalar(
          [&](double d) { return mse_forward(prior, d); }, 1e-9 * sigma, 4.0 * sigma);
      (void)fmin;
      return dmin;
    }
  }
}

CalibrationResult calibrate(std::span<const double> weights, const ThresholdRule& rule) {
  CalibrationResult r;
  switch (rule.kind) {
    case ThresholdRule::Kind::Sigma:
    case ThresholdRule::Kind::FixedK: {
      const double sd = sample_std(weights);
      const double k = rule.kind == ThresholdRule::Kind::Sigma ? 1.0 : rule.k;
      r.delta = k * sd;
      r.k = k;
      double acc = 0.0;
      for (double w : weights) {
        const double rec = r.delta * numeric_value(encode_szt(w, r.delta));
        acc += (w - rec) * (w - rec);
      }
      r.forward_mse = acc / double(weights.size());
      return r;
    }
    case ThresholdRule::Kind::PriorOptimal: {
      if (!rule.prior) throw std::invalid_argument("prior_optimal rule has no prior");
      r.delta = optimal_threshold(*rule.prior);
      r.k = r.delta / rule.prior->std_dev();
      r.forward_mse = mse_forward(*rule.prior, r.delta);
      return r;
    }
  }
  throw std::invalid_argument("unknown threshold rule");
}

PackedTernaryTensor quantize_tensor(std::span<const double> weights,
                                    const std::vector<std::int64_t>& dims,
                                    const LayerQuantConfig& config) {
  if (weights.empty() || dims.empty()) {
    throw std::invalid_argument("cannot quantize an empty tensor");
  }
  std::int64_t numel = 1;
  for (auto d : dims) {
    if (d <= 0) throw std::invalid_argument("tensor dims must be positive");
    numel *= d;
  }
  if (numel != static_cast<std::int64_t>(weights.size())) {
    throw std::invalid_argument("dims do not match the number of weights");
  }

  PackedTernaryTensor out;
  out.dims = dims;
  out.granularity = config.granularity;

  const auto threshold_for = [&](std::span<const double> xs) {
    return calibrate(xs, config.threshold_rule).delta;
  };

  if (config.granularity.per_layer_mode()) {
    out.thresholds = {threshold_for(weights)};
  } else {
    const int axis = config.granularity.axis;
    if (axis < 0 || axis >= static_cast<int>(dims.size())) {
      throw std::invalid_argument("per-channel axis out of range");
    }
    const auto channels = static_cast<std::size_t>(dims[static_cast<std::size_t>(axis)]);
    std::int64_t stride = 1;
    for (std::size_t d = static_cast<std::size_t>(axis) + 1; d < dims.size(); ++d) stride *= dims[d];
    std::vector<std::vector<double>> slices(channels);
    for (std::int64_t i = 0; i < numel; ++i) {
      slices[static_cast<std::size_t>((i / stride) % std::int64_t(channels))].push_back(weights[static_cast<std::size_t>(i)]);
    }
    out.thresholds.resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
      out.thresholds[c] = threshold_for(slices[c]);
    }
  }

  out.scales = out.thresholds;
  if (config.scale_rule == LayerQuantConfig::ScaleRule::Unit) {
    out.scales.assign(out.thresholds.size(), 1.0);
  }

  std::vector<TernaryCode> codes(static_cast<std::size_t>(numel));
  for (std::int64_t i = 0; i < numel; ++i) {
    const double d = out.thresholds[static_cast<std::size_t>(out.channel_of(i))];
    codes[static_cast<std::size_t>(i)] = encode_szt(weights[static_cast<std::size_t>(i)], d);
  }
  out.payload = pack_codes(codes);
  out.validate();
  return out;
}

PackedTernaryTensor quantize_tensor(const DenseTensor& weights, const LayerQuantConfig& config) {
  std::vector<double> w(weights.values.begin(), weights.values.end());
  return quantize_tensor(w, weights.dims, config);
}

}  // namespace szt
