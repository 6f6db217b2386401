#pragma once

#include <string>
#include <vector>

#include "rng.hpp"

namespace szt {

// Parametric or empirical weight/activation distribution.
// Symmetric kinds satisfy p(w) = p(-w); half kinds have support [0, inf).
class Prior {
 public:
  enum class Kind { Laplace, Gaussian, HalfLaplace, HalfGaussian, Empirical };

  static Prior laplace(double b);
  static Prior gaussian(double sigma);
  static Prior half_laplace(double b);
  // sigma is the scale of the underlying normal, N+(0, sigma^2).
  static Prior half_gaussian(double sigma);
  // Requires at least 2 distinct samples.
  static Prior empirical(std::vector<double> samples);

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  bool symmetric() const {
    return kind_ == Kind::Laplace || kind_ == Kind::Gaussian;
  }
  bool parametric() const { return kind_ != Kind::Empirical; }
  double support_min() const;

  double pdf(double w) const;
  double cdf(double w) const;
  double mean() const;
  double std_dev() const;

  // Probability mass of [-delta, delta].
  double mass_within(double delta) const;

  double sample(RandomSource& rng) const;

  std::string describe() const;

  const std::vector<double>& samples() const { return samples_; }

 private:
  Prior(Kind k, double p) : kind_(k), param_(p) {}

  Kind kind_;
  double param_ = 0.0;

  // Empirical state: sorted samples plus Freedman-Diaconis histogram for
  // density queries.
  std::vector<double> samples_;
  double emp_mean_ = 0.0;
  double emp_std_ = 0.0;
  double hist_lo_ = 0.0;
  double hist_width_ = 0.0;
  std::vector<double> hist_density_;
};

}  // namespace szt
