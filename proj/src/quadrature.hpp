#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <limits>
#include <stdexcept>
#include <utility>

namespace szt {

// Adaptive Gauss-Kronrod on [a, b]; either endpoint may be infinite.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, 15, rel_tol, &err);
  if (!(std::isfinite(v))) {
    throw std::runtime_error("quadrature did not converge");
  }
  return v;
}

// Scalar minimization by Brent bracketing on (lo, hi).
// Returns {argmin, min value}. bits ~ 40 resolves x to roughly sqrt(eps).
template <typename F>
std::pair<double, double> minimize_scalar(F&& f, double lo, double hi,
                                          int bits = 40) {
  return boost::math::tools::brent_find_minima(std::forward<F>(f), lo, hi,
                                               bits);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace szt
