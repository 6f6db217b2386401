// Acceptance runner: one numbered criterion per invocation (argv[1]) or all
// of them. Prints one PASS/FAIL line per check plus a summary line per
// criterion; FLAG lines report quantities that are compared but not
// asserted. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "grad.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"
#include "quantize.hpp"
#include "rng.hpp"
#include "sim.hpp"
#include "train.hpp"

using namespace szt;

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kLn2 = 0.69314718055994530942;

int g_sub_failures = 0;

void sub_check(bool ok, const char* tag, const std::string& detail) {
  std::printf("  [%s] %s: %s\n", ok ? "PASS" : "FAIL", tag, detail.c_str());
  if (!ok) ++g_sub_failures;
}

void sub_flag(const char* tag, const std::string& detail) {
  std::printf("  [FLAG] %s: %s\n", tag, detail.c_str());
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string obs_vs(double observed, double expected, double tol) {
  return "observed " + num(observed) + ", expected " + num(expected) + " +- " + num(tol);
}

// ---------------------------------------------------------------- criteria

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();

  const double lap_opt = optimal_threshold(Prior::laplace(1.7));
  const double lap_target = kSqrt2 * 1.7;
  sub_check(std::fabs(lap_opt - lap_target) / lap_target <= 1e-6, "laplace_closed_form",
            obs_vs(lap_opt, lap_target, 1e-6 * lap_target));

  const double g_opt = optimal_threshold(Prior::gaussian(1.0));
  sub_check(std::fabs(g_opt - 0.88) <= 0.01, "gaussian_minimizer", obs_vs(g_opt, 0.88, 0.01));

  // Quoted half-line constants. Direct minimization of the stated forward
  // error puts both optima elsewhere (the one-sided integrand matches the
  // symmetric one on its support), so these two checks measure that
  // discrepancy honestly instead of papering over it.
  const double hg_opt = optimal_threshold(Prior::half_gaussian(1.0));
  sub_check(std::fabs(hg_opt - 0.60) <= 0.02, "half_gaussian_minimizer",
            obs_vs(hg_opt, 0.60, 0.02));

  const Prior hl = Prior::half_laplace(1.0);
  const double hl_opt = optimal_threshold(hl);
  const double hl_target = 0.5 * hl.std_dev();
  sub_check(std::fabs(hl_opt - hl_target) / hl_target <= 0.01, "half_laplace_minimizer",
            obs_vs(hl_opt, hl_target, 0.01 * hl_target));

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  sub_check(secs < 1.0, "runtime_under_1s", num(secs) + " s");
}

void criterion_2() {
  const Prior lap = Prior::laplace(1.0);
  const Prior gauss = Prior::gaussian(1.0);
  const double lap_v = avg_dead_zone_mse(lap, 1.0);
  const double gauss_v = avg_dead_zone_mse(gauss, 1.0);
  sub_check(std::fabs(lap_v - 0.225) <= 1e-3, "laplace_factor", obs_vs(lap_v, 0.225, 1e-3));
  sub_check(std::fabs(gauss_v - 0.291) <= 1e-3, "gaussian_factor", obs_vs(gauss_v, 0.291, 1e-3));
  const double lap_q = avg_dead_zone_mse_quadrature(lap, 1.0);
  const double gauss_q = avg_dead_zone_mse_quadrature(gauss, 1.0);
  sub_check(std::fabs(lap_v - lap_q) <= 1e-6, "laplace_vs_quadrature", obs_vs(lap_v, lap_q, 1e-6));
  sub_check(std::fabs(gauss_v - gauss_q) <= 1e-6, "gaussian_vs_quadrature",
            obs_vs(gauss_v, gauss_q, 1e-6));
}

void criterion_3() {
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double p0 = double(i) / 100.0;
    worst = std::max(worst, std::fabs((entropy_szt(p0) - entropy_bt(p0)) - p0));
  }
  sub_check(worst <= 2e-15, "gap_identity_101_grid", "worst abs err " + num(worst));
}

void criterion_4() {
  const Prior lap = Prior::laplace(1.0);
  const double delta = kSqrt2;

  double worst_f = 0.0, worst_r = 0.0, worst_ratio = 0.0;
  for (double s : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    const double pf = phi_f(lap, delta, s);
    const double pr = phi_r(lap, delta, s);
    const double pf_q = 2.0 * integrate([&](double w) { return lap.pdf(w); }, delta - s, delta, 1e-12);
    const double pr_q = 2.0 * integrate([&](double w) { return lap.pdf(w); }, 0.0, s, 1e-12);
    worst_f = std::max(worst_f, std::fabs(pf - pf_q));
    worst_r = std::max(worst_r, std::fabs(pr - pr_q));
    worst_ratio = std::max(worst_ratio, std::fabs(pr / pf - pr_q / pf_q));
  }
  sub_check(worst_f <= 1e-8, "phi_f_vs_quadrature", "worst abs err " + num(worst_f));
  sub_check(worst_r <= 1e-8, "phi_r_vs_quadrature", "worst abs err " + num(worst_r));
  sub_check(worst_ratio <= 1e-8, "ratio_vs_quadrature", "worst abs err " + num(worst_ratio));

  const double s = 0.1;
  const auto mc = sensitivity_mc(lap, delta, s, 1000000, 24011);
  const double pf = phi_f(lap, delta, s);
  const double pr = phi_r(lap, delta, s);
  sub_check(std::fabs(mc.phi_f_hat - pf) <= 3.0 * mc.se_f, "phi_f_transition_counting",
            obs_vs(mc.phi_f_hat, pf, 3.0 * mc.se_f));
  sub_check(std::fabs(mc.phi_r_hat - pr) <= 3.0 * mc.se_r, "phi_r_transition_counting",
            obs_vs(mc.phi_r_hat, pr, 3.0 * mc.se_r));
  const double ratio_hat = mc.phi_r_hat / mc.phi_f_hat;
  const double ratio = pr / pf;
  const double se_ratio =
      ratio_hat * std::sqrt(std::pow(mc.se_f / mc.phi_f_hat, 2) +
                            std::pow(mc.se_r / mc.phi_r_hat, 2));
  sub_check(std::fabs(ratio_hat - ratio) <= 3.0 * se_ratio, "ratio_transition_counting",
            obs_vs(ratio_hat, ratio, 3.0 * se_ratio));

  const double er = expected_ratio(StepDist::deterministic(s), 1.0, delta);
  const double closed = sensitivity_ratio(lap, delta, s).ratio;
  sub_check(std::fabs(er - closed) <= 1e-12, "mgf_deterministic_reduction",
            obs_vs(er, closed, 1e-12));
}

void criterion_5() {
  const std::vector<double> g = {1.0};
  const double delta = 1.0;
  bool ordered = true, det_zero = true, sr_bounded = true;
  for (double w = 0.01; w <= 0.49 + 1e-12; w += 0.02) {
    const auto s = mse_estimate_mc(SteKind::SZT, w, delta, g, 2000, 5);
    const auto r = mse_estimate_mc(SteKind::SR, w, delta, g, 100000, 5);
    const auto b = mse_estimate_mc(SteKind::BT, w, delta, g, 2000, 5);
    ordered = ordered && s.mse < r.mse && r.mse < b.mse;
    det_zero = det_zero && s.variance == 0.0 && b.variance == 0.0;
    sr_bounded = sr_bounded && r.variance <= 0.25 + 3.0 * r.variance_se + 1e-12;
  }
  sub_check(ordered, "measured_mse_ordering", "szt < sr < bt on w in {0.01..0.49}");
  sub_check(det_zero, "deterministic_zero_variance", "exact zeros for szt and bt");
  sub_check(sr_bounded, "sr_variance_quarter_rule", "within 3 mc standard errors");
}

void criterion_6() {
  // Oracle behavior at the diffusion limit.
  const double limit = ou_mfpt_bvp(1e-6, 1.0, 1.0);
  sub_check(std::fabs(limit - 1.0) <= 1e-3, "bvp_diffusion_limit", obs_vs(limit, 1.0, 1e-3));

  // 3x3 grid, 2e4 paths each; dt chosen per cell from the barrier size so
  // the Euler discretization bias stays well inside the budget.
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (double lambda : {0.4, 0.8, 1.2}) {
      OuParams p;
      p.kappa = kappa;
      p.sigma = 1.0;
      p.delta = lambda / kappa;
      // Discrete monitoring misses crossings and overestimates the exit
      // time by roughly 1.17 * max(1, lambda delta) / sqrt(K) relative at
      // dt = delta^2 / K, so K keeps the bias near one percent.
      const double ld = lambda * p.delta;
      p.dt = p.delta * p.delta / std::max(10000.0, 6100.0 * ld * ld);
      p.trials = 20000;
      p.seed = 60001 + std::uint64_t(kappa * 10) * 100 + std::uint64_t(lambda * 10);
      p.threads = 2;
      const auto est = ou_mfpt_mc(p);
      const double oracle = ou_mfpt_bvp(p.kappa, p.sigma, p.delta);
      const double rel = std::fabs(est.mean - oracle) / oracle;
      char tag[64];
      std::snprintf(tag, sizeof(tag), "mc_vs_bvp_k%.1f_l%.1f", kappa, lambda);
      sub_check(rel <= 0.05, tag,
                "mc " + num(est.mean) + " vs bvp " + num(oracle) + " (rel " + num(rel) + ")");
    }
  }

  // The quoted closed forms are evaluated and reported, never asserted.
  const double bvp_ref = ou_mfpt_bvp(1.0, 1.0, 1.0);
  sub_flag("closed_form_three_state",
           "quoted " + num(mfpt_closed_bt(1.0, 1.0, 1.0)) + " vs bvp " + num(bvp_ref));
  sub_flag("closed_form_four_state",
           "quoted " + num(mfpt_closed_szt(1.0)) + " vs bvp " + num(bvp_ref));
  sub_flag("closed_form_ratio", "(sqrt(pi)/2 lambda) e^(lambda^2) at lambda=1 = " +
                                    num(mfpt_ratio(1.0)));
}

void criterion_7() {
  const Prior lap = Prior::laplace(1.0);
  const double delta = kSqrt2, s = 0.1;
  const auto est = renewal_mc(StepDist::deterministic(s), lap, delta, 100000, 70707);
  const double pf = phi_f(lap, delta, s);
  const double pr = phi_r(lap, delta, s);
  sub_check(std::fabs(est.mean_t_f - 1.0 / pf) <= 3.0 * est.se_t_f, "waiting_time_numeric",
            obs_vs(est.mean_t_f, 1.0 / pf, 3.0 * est.se_t_f));
  sub_check(std::fabs(est.mean_t_r - 1.0 / pr) <= 3.0 * est.se_t_r, "waiting_time_sign",
            obs_vs(est.mean_t_r, 1.0 / pr, 3.0 * est.se_t_r));
  const double ratio = est.mean_t_f / est.mean_t_r;
  const double expected = pr / pf;
  const double se_ratio = ratio * std::sqrt(std::pow(est.se_t_f / est.mean_t_f, 2) +
                                            std::pow(est.se_t_r / est.mean_t_r, 2));
  sub_check(std::fabs(ratio - expected) <= 3.0 * se_ratio, "waiting_time_ratio",
            obs_vs(ratio, expected, 3.0 * se_ratio));
}

void criterion_8() {
  // Forward identity on random plus boundary inputs.
  RandomSource rng(88);
  const double delta = 1.0;
  bool identity = true;
  for (int i = 0; i < 1000000; ++i) {
    const double w = rng.uniform(-3.0, 3.0);
    identity = identity && numeric_value(encode_szt(w, delta)) == numeric_value(encode_bt(w, delta));
  }
  for (double w : {-delta, std::nextafter(-delta, -2.0), std::nextafter(-delta, 0.0), 0.0,
                   1e-300, -1e-300, delta, std::nextafter(delta, 0.0), std::nextafter(delta, 2.0)}) {
    identity = identity && numeric_value(encode_szt(w, delta)) == numeric_value(encode_bt(w, delta));
  }
  sub_check(identity, "forward_identity_1e6", "bit-exact numeric agreement");

  // Stacked forward outputs bit-identical under both encoders.
  LinearStack stack;
  const std::vector<std::int64_t> dims = {8, 24, 16, 4};
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix m(dims[l + 1], dims[l]);
    for (auto& v : m.a) v = rng.laplace(0.6);
    stack.weights.push_back(std::move(m));
    stack.biases.emplace_back(std::size_t(dims[l + 1]), 0.05);
  }
  const auto cmp = stacked_snr_mc(stack, 0.8, 500, 4242);
  sub_check(cmp.outputs_bit_identical && cmp.var_bt == cmp.var_szt, "stacked_bit_identity",
            "var " + num(cmp.var_bt) + " both encoders");

  // Error-propagation formula vs Monte Carlo injection.
  const double eps_var = 0.04;
  const double formula = stacked_error_variance(stack, eps_var);
  const double mc = stacked_error_variance_mc(stack, eps_var, 120000, 99, 2);
  const double rel = std::fabs(mc - formula) / formula;
  sub_check(rel <= 0.05, "stack_variance_formula_vs_mc",
            "mc " + num(mc) + " vs formula " + num(formula) + " (rel " + num(rel) + ")");
}

void criterion_9() {
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.dataset_size = 256;
  cfg.seed = 1234;

  for (SteKind kind : {SteKind::BT, SteKind::SZT}) {
    cfg.ste = kind;
    cfg.threads = 1;
    const auto a = train(cfg);
    const auto b = train(cfg);
    cfg.threads = 4;
    const auto c = train(cfg);
    char tag[64];
    std::snprintf(tag, sizeof(tag), "%s_digest_stability", ste_name(kind));
    sub_check(a.checkpoint_digest == b.checkpoint_digest &&
                  a.checkpoint_digest == c.checkpoint_digest,
              tag, "rerun and threads 1 vs 4 agree: " + a.checkpoint_digest.substr(0, 16) + "...");
    if (kind == SteKind::SZT) {
      sub_check(a.representational_transitions > 0, "szt_sign_transitions",
                std::to_string(a.representational_transitions) + " sign flips");
    } else {
      sub_check(a.representational_transitions == 0, "bt_sign_transitions_zero",
                std::to_string(a.representational_transitions) + " sign flips");
    }
  }
}

void criterion_10() {
  const double gap = pac_bayes_gap(1e6, 0.25, 100000);
  sub_check(std::fabs(gap - 0.9309) <= 1e-4, "gap_value", obs_vs(gap, 0.9309, 1e-4));
  const double oracle = std::sqrt(1e6 * 0.25 * kLn2 / (2.0 * 99999.0));
  sub_check(std::fabs(gap - oracle) <= 1e-15, "gap_arithmetic_oracle", obs_vs(gap, oracle, 1e-15));

  double worst = 0.0;
  for (double p0 : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    for (double q0 : {0.2, 0.5, 0.8}) {
      const auto kl = kl_categorical_pair(p0, q0);
      worst = std::max(worst, std::fabs((kl.kl_bt - kl.kl_szt) - p0 * kLn2));
    }
  }
  sub_check(worst <= 1e-12, "categorical_reduction", "worst abs err " + num(worst));
}

void criterion_11() {
  RandomSource rng(1111);
  bool roundtrip = true;
  for (int iter = 0; iter < 10000 && roundtrip; ++iter) {
    const std::size_t n = rng.next_u64() % 257;
    std::vector<TernaryCode> codes(n);
    for (auto& c : codes) c = static_cast<TernaryCode>(rng.next_u64() & 3);
    const auto bytes = pack_codes(codes);
    roundtrip = roundtrip && bytes.size() == (n + 3) / 4 && unpack_codes(bytes, n) == codes;
  }
  sub_check(roundtrip, "roundtrip_10k_sequences", "byte-exact");

  const auto vec = pack_codes({TernaryCode::ZeroPlus, TernaryCode::PlusOne,
                               TernaryCode::ZeroMinus, TernaryCode::MinusOne});
  sub_check(vec.size() == 1 && vec[0] == 0xE4, "documented_vector",
            "0x" + [&] { char b[8]; std::snprintf(b, 8, "%02X", vec.empty() ? 0 : vec[0]); return std::string(b); }());
}

struct Criterion {
  int id;
  const char* title;
  void (*fn)();
};

const Criterion kCriteria[] = {
    {1, "threshold optima", criterion_1},
    {2, "dead-zone mse factors", criterion_2},
    {3, "entropy gap identity", criterion_3},
    {4, "sensitivity closed forms", criterion_4},
    {5, "ste mse hierarchy", criterion_5},
    {6, "first-passage times", criterion_6},
    {7, "renewal waiting times", criterion_7},
    {8, "forward identity and stacked variance", criterion_8},
    {9, "training reproducibility", criterion_9},
    {10, "pac-bayes algebra", criterion_10},
    {11, "bit packing", criterion_11},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failed_criteria = 0;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    std::printf("criterion %d (%s):\n", c.id, c.title);
    g_sub_failures = 0;
    c.fn();
    const bool ok = g_sub_failures == 0;
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", c.id, c.title);
    if (!ok) ++failed_criteria;
  }
  if (failed_criteria > 0) {
    std::printf("acceptance: %d criterion(s) failed\n", failed_criteria);
  } else {
    std::printf("acceptance: all selected criteria passed\n");
  }
  return failed_criteria;
}
