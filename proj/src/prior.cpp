#include "prior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace szt {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

double check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
  return v;
}
}  // namespace

Prior Prior::laplace(double b) { return Prior(Kind::Laplace, check_positive(b, "laplace scale")); }
Prior Prior::gaussian(double sigma) { return Prior(Kind::Gaussian, check_positive(sigma, "gaussian sigma")); }
Prior Prior::half_laplace(double b) { return Prior(Kind::HalfLaplace, check_positive(b, "half-laplace scale")); }
Prior Prior::half_gaussian(double sigma) { return Prior(Kind::HalfGaussian, check_positive(sigma, "half-gaussian sigma")); }

Prior Prior::empirical(std::vector<double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("empirical prior needs at least 2 samples");
  }
  Prior p(Kind::Empirical, 0.0);
  std::sort(samples.begin(), samples.end());
  if (samples.front() == samples.back()) {
    throw std::invalid_argument("empirical prior needs at least 2 distinct samples");
  }
  const std::size_t n = samples.size();
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / double(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  p.emp_mean_ = mean;
  p.emp_std_ = std::sqrt(ss / double(n - 1));

  // Freedman-Diaconis bin width for density queries.
  const double q1 = samples[(n - 1) / 4];
  const double q3 = samples[(3 * (n - 1)) / 4];
  double iqr = q3 - q1;
  if (iqr <= 0.0) iqr = p.emp_std_;
  double width = 2.0 * iqr / std::cbrt(double(n));
  const double span = samples.back() - samples.front();
  if (!(width > 0.0)) width = span;
  std::size_t bins = static_cast<std::size_t>(std::ceil(span / width));
  bins = std::clamp<std::size_t>(bins, 1, 100000);
  width = span / double(bins);
  p.hist_lo_ = samples.front();
  p.hist_width_ = width;
  p.hist_density_.assign(bins, 0.0);
  for (double x : samples) {
    std::size_t idx = static_cast<std::size_t>((x - p.hist_lo_) / width);
    if (idx >= bins) idx = bins - 1;
    p.hist_density_[idx] += 1.0;
  }
  for (double& d : p.hist_density_) d /= double(n) * width;
  p.samples_ = std::move(samples);
  return p;
}

double Prior::support_min() const {
  switch (kind_) {
    case Kind::HalfLaplace:
    case Kind::HalfGaussian:
      return 0.0;
    case Kind::Empirical:
      return samples_.front();
    default:
      return -std::numeric_limits<double>::infinity();
  }
}

double Prior::pdf(double w) const {
  switch (kind_) {
    case Kind::Laplace:
      return std::exp(-std::fabs(w) / param_) / (2.0 * param_);
    case Kind::Gaussian: {
      const double z = w / param_;
      return std::exp(-0.5 * z * z) / (param_ * std::sqrt(2.0 * kPi));
    }
    case Kind::HalfLaplace:
      return w < 0.0 ? 0.0 : std::exp(-w / param_) / param_;
    case Kind::HalfGaussian: {
      if (w < 0.0) return 0.0;
      const double z = w / param_;
      return std::sqrt(2.0 / kPi) / param_ * std::exp(-0.5 * z * z);
    }
    case Kind::Empirical: {
      if (hist_density_.empty()) return 0.0;
      const double hi = hist_lo_ + hist_width_ * double(hist_density_.size());
      if (w < hist_lo_ || w > hi) return 0.0;
      std::size_t idx = static_cast<std::size_t>((w - hist_lo_) / hist_width_);
      if (idx >= hist_density_.size()) idx = hist_density_.size() - 1;
      return hist_density_[idx];
    }
  }
  return 0.0;
}

double Prior::cdf(double w) const {
  switch (kind_) {
    case Kind::Laplace:
      return w < 0.0 ? 0.5 * std::exp(w / param_)
                     : 1.0 - 0.5 * std::exp(-w / param_);
    case Kind::Gaussian:
      return 0.5 * std::erfc(-w / (param_ * kSqrt2));
    case Kind::HalfLaplace:
      return w < 0.0 ? 0.0 : 1.0 - std::exp(-w / param_);
    case Kind::HalfGaussian:
      return w < 0.0 ? 0.0 : std::erf(w / (param_ * kSqrt2));
    case Kind::Empirical: {
      const auto it = std::upper_bound(samples_.begin(), samples_.end(), w);
      return double(it - samples_.begin()) / double(samples_.size());
    }
  }
  return 0.0;
}

double Prior::mean() const {
  switch (kind_) {
    case Kind::Laplace:
    case Kind::Gaussian:
      return 0.0;
    case Kind::HalfLaplace:
      return param_;
    case Kind::HalfGaussian:
      return param_ * std::sqrt(2.0 / kPi);
    case Kind::Empirical:
      return emp_mean_;
  }
  return 0.0;
}

double Prior::std_dev() const {
  switch (kind_) {
    case Kind::Laplace:
      return kSqrt2 * param_;
    case Kind::Gaussian:
      return param_;
    case Kind::HalfLaplace:
      return param_;  // exponential(b): sd = b
    case Kind::HalfGaussian:
      return param_ * std::sqrt(1.0 - 2.0 / kPi);
    case Kind::Empirical:
      return emp_std_;
  }
  return 0.0;
}

double Prior::mass_within(double delta) const {
  if (!(delta > 0.0)) throw std::invalid_argument("mass_within: delta must be > 0");
  return cdf(delta) - cdf(-delta);
}

double Prior::sample(RandomSource& rng) const {
  switch (kind_) {
    case Kind::Laplace:
      return rng.laplace(param_);
    case Kind::Gaussian:
      return param_ * rng.normal();
    case Kind::HalfLaplace:
      return rng.exponential(param_);
    case Kind::HalfGaussian:
      return param_ * std::fabs(rng.normal());
    case Kind::Empirical: {
      const std::uint64_t i = rng.next_u64() % samples_.size();
      return samples_[static_cast<std::size_t>(i)];
    }
  }
  return 0.0;
}

std::string Prior::describe() const {
  switch (kind_) {
    case Kind::Laplace:
      return "laplace(b=" + std::to_string(param_) + ")";
    case Kind::Gaussian:
      return "gaussian(sigma=" + std::to_string(param_) + ")";
    case Kind::HalfLaplace:
      return "half_laplace(b=" + std::to_string(param_) + ")";
    case Kind::HalfGaussian:
      return "half_gaussian(sigma=" + std::to_string(param_) + ")";
    case Kind::Empirical:
      return "empirical(n=" + std::to_string(samples_.size()) + ")";
  }
  return "?";
}

}  // namespace szt
