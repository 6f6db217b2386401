#include "sim.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace szt {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void OuParams::validate() const {
  if (!(kappa > 0.0 && sigma > 0.0 && delta > 0.0 && dt > 0.0)) {
    throw std::invalid_argument("ou params must all be positive");
  }
  const double guard = delta * delta / (100.0 * sigma * sigma);
  if (dt > guard) {
    throw std::invalid_argument(
        "dt too coarse for the barrier: need dt <= delta^2 / (100 sigma^2) = " +
        std::to_string(guard));
  }
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

MfptEstimate ou_mfpt_mc(const OuParams& params) {
  params.validate();
  const double drift = -params.kappa * params.dt;
  const double diffusion = params.sigma * std::sqrt(params.dt);
  const RandomSource root(params.seed);

  std::vector<double> exit_time(std::size_t(params.trials), 0.0);
  const auto run = [&](std::int64_t t0, std::int64_t t1) {
    for (std::int64_t t = t0; t < t1; ++t) {
      RandomSource rng = root.split(std::uint64_t(t));
      double w = 0.0;
      std::int64_t steps = 0;
      while (std::fabs(w) < params.delta) {
        if (++steps > kMaxStepsPerPath) {
          throw NoEscapeError(
              "path exceeded step cap without exit (kappa=" + std::to_string(params.kappa) +
              " sigma=" + std::to_string(params.sigma) + " delta=" + std::to_string(params.delta) +
              " dt=" + std::to_string(params.dt) + " trial=" + std::to_string(t) + ")");
        }
        w += drift * w + diffusion * rng.normal();
      }
      exit_time[std::size_t(t)] = double(steps) * params.dt;
    }
  };

  if (params.threads <= 1) {
    run(0, params.trials);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    const std::int64_t chunk = (params.trials + params.threads - 1) / params.threads;
    for (int t = 0; t < params.threads; ++t) {
      const std::int64_t a = t * chunk;
      const std::int64_t b = std::min<std::int64_t>(params.trials, a + chunk);
      if (a >= b) break;
      pool.emplace_back([&, a, b] {
        try {
          run(a, b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  double mean = 0.0;
  for (double v : exit_time) mean += v;  // fixed trial order
  mean /= double(params.trials);
  double ss = 0.0;
  for (double v : exit_time) ss += (v - mean) * (v - mean);
  const double sd = params.trials > 1 ? std::sqrt(ss / double(params.trials - 1)) : 0.0;

  MfptEstimate est;
  est.mean = mean;
  est.ci95_halfwidth = 1.96 * sd / std::sqrt(double(params.trials));
  est.trials_escaped = params.trials;
  return est;
}

double ou_mfpt_bvp(double kappa, double sigma, double delta) {
  if (!(kappa > 0.0 && sigma > 0.0 && delta > 0.0)) {
    throw std::invalid_argument("bvp parameters must be positive");
  }
  // tau(0) = (2/sigma^2) int_0^delta exp(a y^2) int_0^y exp(-a z^2) dz dy
  // with a = kappa / sigma^2; the inner integral is erf in disguise:
  //   int_0^y exp(-a z^2) dz = sqrt(pi) / (2 sqrt(a)) erf(sqrt(a) y).
  const double a = kappa / (sigma * sigma);
  const double sa = std::sqrt(a);
  const double pref = std::sqrt(kPi) / (sigma * sigma * sa);
  return pref * integrate(
                    [&](double y) { return std::exp(a * y * y) * std::erf(sa * y); },
                    0.0, delta, 1e-10);
}

RenewalEstimate renewal_mc(const StepDist& step, const Prior& prior, double delta,
                           std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(step.max_support() <= delta)) {
    throw std::invalid_argument("step distribution must be supported inside (0, delta)");
  }

  // Deterministic steps have constant firing probabilities; hoist them.
  const bool fixed = step.kind == StepDist::Kind::Deterministic;
  const double pf_fixed = fixed ? phi_f(prior, delta, step.value) : 0.0;
  const double pr_fixed = fixed ? phi_r(prior, delta, step.value) : 0.0;

  RandomSource rng(seed);
  std::vector<double> tf(static_cast<std::size_t>(trials)), tr(static_cast<std::size_t>(trials));
  constexpr std::int64_t kCap = 100'000'000;
  const auto wait = [&](bool forward) {
    for (std::int64_t k = 1; k <= kCap; ++k) {
      double p;
      if (fixed) {
        p = forward ? pf_fixed : pr_fixed;
      } else {
        const double s = step.sample(rng);
        p = forward ? phi_f(prior, delta, s) : phi_r(prior, delta, s);
      }
      if (rng.uniform01() < p) return double(k);
    }
    throw NoEscapeError("renewal trial exceeded step cap");
  };
  for (std::int64_t t = 0; t < trials; ++t) {
    tf[std::size_t(t)] = wait(true);
    tr[std::size_t(t)] = wait(false);
  }

  const auto summarize = [&](const std::vector<double>& xs, double& mean, double& se, double& var) {
    mean = 0.0;
    for (double v : xs) mean += v;
    mean /= double(xs.size());
    double ss = 0.0;
    for (double v : xs) ss += (v - mean) * (v - mean);
    var = xs.size() > 1 ? ss / double(xs.size() - 1) : 0.0;
    se = std::sqrt(var / double(xs.size()));
  };

  RenewalEstimate est;
  summarize(tf, est.mean_t_f, est.se_t_f, est.var_t_f);
  summarize(tr, est.mean_t_r, est.se_t_r, est.var_t_r);
  return est;
}

}  // namespace szt
