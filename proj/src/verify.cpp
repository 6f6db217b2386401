#include "verify.hpp"

#include <cmath>
#include <stdexcept>

#include "analysis.hpp"
#include "grad.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"
#include "quantize.hpp"
#include "sim.hpp"
#include "train.hpp"

namespace szt {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

std::string fmt_inputs(std::initializer_list<std::pair<const char*, double>> kv) {
  std::string s;
  for (const auto& [k, v] : kv) {
    if (!s.empty()) s += ' ';
    s += k;
    s += '=';
    s += format_g17(v);
  }
  return s;
}

void append(std::vector<CheckRow>& dst, std::vector<CheckRow> src) {
  for (auto& r : src) dst.push_back(std::move(r));
}

std::vector<CheckRow> suite_sensitivity() {
  std::vector<CheckRow> rows;
  const Prior lap = Prior::laplace(1.0);
  const double delta = kSqrt2;

  for (double s : {0.05, 0.1, 0.25, 0.5, 1.0}) {
    const double pf = phi_f(lap, delta, s);
    const double pr = phi_r(lap, delta, s);
    const double pf_q = 2.0 * integrate([&](double w) { return lap.pdf(w); }, delta - s, delta, 1e-12);
    const double pr_q = 2.0 * integrate([&](double w) { return lap.pdf(w); }, 0.0, s, 1e-12);
    rows.push_back(make_row("sensitivity", "phi_f_closed_vs_quadrature",
                            fmt_inputs({{"b", 1.0}, {"delta", delta}, {"s", s}}), pf, pf_q, 1e-8));
    rows.push_back(make_row("sensitivity", "phi_r_closed_vs_quadrature",
                            fmt_inputs({{"b", 1.0}, {"delta", delta}, {"s", s}}), pr, pr_q, 1e-8));

    // Sandwich from unimodality: phi_r <= 2 s p(0), phi_f >= 2 s p(delta),
    // and the ratio is at least 1.
    const double ub_r = 2.0 * s * lap.pdf(0.0);
    const double lb_f = 2.0 * s * lap.pdf(delta);
    rows.push_back(make_row("sensitivity", "phi_r_below_2sp0",
                            fmt_inputs({{"s", s}}), pr <= ub_r ? 1.0 : 0.0, 1.0, 0.0));
    rows.push_back(make_row("sensitivity", "phi_f_above_2spdelta",
                            fmt_inputs({{"s", s}}), pf >= lb_f ? 1.0 : 0.0, 1.0, 0.0));
    rows.push_back(make_row("sensitivity", "ratio_at_least_one",
                            fmt_inputs({{"s", s}}), pr / pf >= 1.0 ? 1.0 : 0.0, 1.0, 0.0));

    // The displayed lower bound p(0)/p(delta) does not hold for finite s
    // (the ratio approaches it only as s -> 0), so it is reported, not
    // asserted.
    const auto rep = sensitivity_ratio(lap, delta, s);
    rows.push_back(make_flag("sensitivity", "ratio_vs_density_ratio",
                             fmt_inputs({{"s", s}}), rep.ratio, rep.density_ratio,
                             rep.ratio >= rep.density_ratio ? "holds" : "below bound"));
  }

  // s -> 0 limit of the ratio approaches p(0)/p(delta).
  {
    const auto rep = sensitivity_ratio(lap, delta, 1e-7);
    rows.push_back(make_row("sensitivity", "ratio_small_s_limit", fmt_inputs({{"s", 1e-7}}),
                            rep.ratio, rep.density_ratio, 1e-4));
  }

  // Monte Carlo transition counting against the closed forms.
  {
    const double s = 0.1;
    const auto mc = sensitivity_mc(lap, delta, s, 200000, 20240817);
    const double pf = phi_f(lap, delta, s);
    const double pr = phi_r(lap, delta, s);
    rows.push_back(make_row("sensitivity", "phi_f_mc", fmt_inputs({{"s", s}}),
                            mc.phi_f_hat, pf, 3.0 * mc.se_f));
    rows.push_back(make_row("sensitivity", "phi_r_mc", fmt_inputs({{"s", s}}),
                            mc.phi_r_hat, pr, 3.0 * mc.se_r));
  }

  // Step-averaged ratio: deterministic steps reduce to the closed form.
  {
    const double s0 = 0.1;
    const double er = expected_ratio(StepDist::deterministic(s0), 1.0, delta);
    const auto rep = sensitivity_ratio(lap, delta, s0);
    rows.push_back(make_row("sensitivity", "mgf_deterministic_reduction",
                            fmt_inputs({{"s0", s0}}), er, rep.ratio, 1e-12));
  }

  // Two identical channels aggregate to exactly twice one channel.
  {
    const auto one = feedback_events(1000, StepDist::deterministic(0.1), lap, {delta});
    const auto two = feedback_events(1000, StepDist::deterministic(0.1), lap, {delta, delta});
    rows.push_back(make_row("sensitivity", "per_channel_sum_rule", "channels=2",
                            two.e_f_total, 2.0 * one.e_f_total, 0.0));
    rows.push_back(make_flag("sensitivity", "event_ratio_vs_density_ratio", "channels=2",
                             two.e_r_total / two.e_f_total, std::exp(delta),
                             "aggregate ratio vs min-channel density ratio"));
  }
  return rows;
}

std::vector<CheckRow> suite_entropy() {
  std::vector<CheckRow> rows;
  double worst = 0.0, worst_p = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double p0 = double(i) / 100.0;
    const double gap = entropy_szt(p0) - entropy_bt(p0);
    const double err = std::fabs(gap - p0);
    if (err > worst) {
      worst = err;
      worst_p = p0;
    }
  }
  rows.push_back(make_row("entropy", "gap_identity_grid_101",
                          fmt_inputs({{"worst_p0", worst_p}}), worst, 0.0, 2e-15));
  rows.push_back(make_row("entropy", "four_equiprobable_states", "p0=0.5",
                          entropy_szt(0.5), 2.0, 1e-15));
  rows.push_back(make_row("entropy", "bt_at_half", "p0=0.5", entropy_bt(0.5), 1.5, 1e-15));
  rows.push_back(make_row("entropy", "gap_at_zero_mass", "p0=0", entropy_gap(0.0), 0.0, 0.0));
  const Prior lap = Prior::laplace(1.0);
  rows.push_back(make_row("entropy", "dead_zone_mass_laplace",
                          fmt_inputs({{"delta", kSqrt2}}), dead_zone_mass(lap, kSqrt2),
                          -std::expm1(-kSqrt2), 1e-15));
  rows.push_back(make_row("entropy", "dead_zone_mass_gaussian", "delta=1",
                          dead_zone_mass(Prior::gaussian(1.0), 1.0),
                          std::erf(1.0 / kSqrt2), 1e-15));
  return rows;
}

std::vector<CheckRow> suite_mse() {
  std::vector<CheckRow> rows;
  const Prior lap = Prior::laplace(1.0);
  const Prior gauss = Prior::gaussian(1.0);

  // Closed form against quadrature for the Laplace forward error.
  for (double d : {0.5, 1.0, kSqrt2, 2.5}) {
    const double closed = mse_forward(lap, d);
    const double quad =
        integrate([&](double w) { const double e = w + d; return e * e * lap.pdf(w); }, -kInf, -d, 1e-12) +
        integrate([&](double w) { return w * w * lap.pdf(w); }, -d, d, 1e-12) +
        integrate([&](double w) { const double e = w - d; return e * e * lap.pdf(w); }, d, kInf, 1e-12);
    rows.push_back(make_row("mse", "laplace_closed_vs_quadrature",
                            fmt_inputs({{"delta", d}}), closed, quad, 1e-8));
  }

  // Optimal thresholds.
  rows.push_back(make_row("mse", "laplace_optimum", "b=1", optimal_threshold(lap), kSqrt2, 1e-6));
  rows.push_back(make_row("mse", "laplace_scale_equivariance", "c=2.5",
                          optimal_threshold(Prior::laplace(2.5)),
                          2.5 * optimal_threshold(lap), 1e-9));
  {
    const double dg = optimal_threshold(gauss);
    rows.push_back(make_row("mse", "gaussian_optimum", "sigma=1", dg, 0.88, 0.01));
    // Optimality over a 100-point grid.
    bool ok = true;
    const double fmin = mse_forward(gauss, dg);
    for (int i = 1; i <= 100; ++i) {
      const double d = 4.0 * double(i) / 100.0;
      if (mse_forward(gauss, d) < fmin - 1e-12) ok = false;
    }
    rows.push_back(make_row("mse", "gaussian_grid_optimality", "grid=100", ok ? 1.0 : 0.0, 1.0, 0.0));
  }
  // Half-line prior optima are reported, not asserted: direct minimization
  // of the stated integral lands far from the quoted constants (see the
  // acceptance suite notes).
  rows.push_back(make_flag("mse", "half_gaussian_optimum_vs_quoted", "sigma=1",
                           optimal_threshold(Prior::half_gaussian(1.0)), 0.60,
                           "direct minimization of the forward error"));
  rows.push_back(make_flag("mse", "half_laplace_optimum_vs_quoted", "b=1",
                           optimal_threshold(Prior::half_laplace(1.0)), 0.5,
                           "quoted value is half the population sigma"));

  // Distribution-independent bound sigma^2/(1+k^2): holds near k = 1,
  // fails for large k, so the grid is reported with per-point status.
  for (double k = 0.25; k <= 3.0 + 1e-9; k += 0.25) {
    for (const Prior* p : {&lap, &gauss}) {
      const double sigma = p->std_dev();
      const double bound = sigma * sigma / (1.0 + k * k);
      const double v = mse_forward(*p, k * sigma);
      if (k <= 1.0) {
        rows.push_back(make_row("mse", "variance_bound_holds",
                                fmt_inputs({{"k", k}}), v <= bound ? 1.0 : 0.0, 1.0, 0.0,
                                p->describe()));
      } else {
        rows.push_back(make_flag("mse", "variance_bound_reported",
                                 fmt_inputs({{"k", k}}), v, bound,
                                 p->describe() + (v <= bound ? " holds" : " exceeded")));
      }
    }
  }

  // Dead-zone second-moment factors at k = 1.
  rows.push_back(make_row("mse", "dead_zone_factor_laplace", "k=1",
                          avg_dead_zone_mse(lap, 1.0), 0.225, 1e-3));
  rows.push_back(make_row("mse", "dead_zone_factor_gaussian", "k=1",
                          avg_dead_zone_mse(gauss, 1.0), 0.291, 1e-3));
  rows.push_back(make_row("mse", "dead_zone_factor_quadrature", "k=1",
                          avg_dead_zone_mse(gauss, 1.0),
                          avg_dead_zone_mse_quadrature(gauss, 1.0), 1e-6));

  // Identical decode for the two encoders on a sampled population.
  {
    RandomSource rng(7);
    bool identical = true;
    double acc_bt = 0.0, acc_szt = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double w = lap.sample(rng);
      const double rb = kSqrt2 * numeric_value(encode_bt(w, kSqrt2));
      const double rs = kSqrt2 * numeric_value(encode_szt(w, kSqrt2));
      identical = identical && rb == rs;
      acc_bt += (w - rb) * (w - rb);
      acc_szt += (w - rs) * (w - rs);
    }
    rows.push_back(make_row("mse", "bt_szt_decode_identical", "n=20000",
                            identical ? 1.0 : 0.0, 1.0, 0.0));
    rows.push_back(make_row("mse", "bt_szt_mse_bitwise_equal", "n=20000", acc_bt, acc_szt, 0.0));
  }
  return rows;
}

std::vector<CheckRow> suite_pacbayes() {
  std::vector<CheckRow> rows;
  const double gap = pac_bayes_gap(1e6, 0.25, 100000);
  const double oracle = std::sqrt(1e6 * 0.25 * std::log(2.0) / (2.0 * 99999.0));
  rows.push_back(make_row("pacbayes", "gap_arithmetic", "d=1e6 p0=0.25 n=1e5", gap, oracle, 1e-15));
  rows.push_back(make_row("pacbayes", "gap_quoted_value", "d=1e6 p0=0.25 n=1e5", gap, 0.9309, 1e-4));
  rows.push_back(make_row("pacbayes", "gap_zero_mass", "p0=0", pac_bayes_gap(1e6, 0.0, 100000), 0.0, 0.0));
  rows.push_back(make_row("pacbayes", "gap_quarter_n_scaling", "n-1 x4",
                          pac_bayes_gap(1e6, 0.25, 4 * 99999 + 1), 0.5 * gap, 1e-12));

  const double b1 = pac_bayes_bound(0.0, 0.0, 100000, 0.05);
  const double b1_oracle = std::sqrt(std::log(2.0 * std::sqrt(1e5) / 0.05) / (2.0 * 99999.0));
  rows.push_back(make_row("pacbayes", "bound_arithmetic", "kl=0 n=1e5 conf=0.05", b1, b1_oracle, 1e-15));
  rows.push_back(make_row("pacbayes", "bound_large_n_limit", "n=1e9",
                          pac_bayes_bound(0.125, 0.0, 1000000000, 0.05), 0.125, 1e-3));

  // Recomputing the bound with the reduced KL reproduces the boxed gap
  // only to first order; both quantities are reported exactly.
  {
    const double d = 1e6, p0 = 0.25, n = 1e5, kl_bt = 2.0e6, conf = 0.05;
    const double hi = pac_bayes_bound(0.0, kl_bt, std::int64_t(n), conf);
    const double lo = pac_bayes_bound(0.0, kl_bt - kl_reduction(d, p0), std::int64_t(n), conf);
    rows.push_back(make_flag("pacbayes", "exact_bound_difference", "kl_bt=2e6",
                             hi - lo, pac_bayes_gap(d, p0, std::int64_t(n)),
                             "boxed gap assumes kl term dominates"));
  }

  rows.push_back(make_row("pacbayes", "kl_reduction", "d=100 p0=0.2",
                          kl_reduction(100, 0.2), 13.863, 1e-3));
  double worst = 0.0;
  for (double p0 : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    for (double q0 : {0.2, 0.5, 0.8}) {
      const auto kl = kl_categorical_pair(p0, q0);
      worst = std::max(worst, std::fabs((kl.kl_bt - kl.kl_szt) - p0 * std::log(2.0)));
    }
  }
  rows.push_back(make_row("pacbayes", "categorical_reduction_grid", "15 pairs", worst, 0.0, 1e-12));
  return rows;
}

std::vector<CheckRow> suite_mfpt() {
  std::vector<CheckRow> rows;
  // Pure-diffusion limit of the oracle.
  rows.push_back(make_row("mfpt", "bvp_diffusion_limit", "kappa=1e-6 sigma=1 delta=1",
                          ou_mfpt_bvp(1e-6, 1.0, 1.0), 1.0, 1e-3));
  rows.push_back(make_row("mfpt", "bvp_scale_invariance", "c=3",
                          ou_mfpt_bvp(0.7, 3.0, 3.6), ou_mfpt_bvp(0.7, 1.0, 1.2), 1e-8));

  // Monte Carlo against the oracle on two cells (the acceptance suite runs
  // the full grid).
  for (const auto& [kappa, lambda] : std::vector<std::pair<double, double>>{{1.0, 0.8}, {2.0, 1.2}}) {
    OuParams p;
    p.kappa = kappa;
    p.sigma = 1.0;
    p.delta = lambda / kappa;
    const double ld = lambda * p.delta;
    p.dt = p.delta * p.delta / std::max(10000.0, 6100.0 * ld * ld);
    p.trials = 10000;
    p.seed = 99;
    p.threads = 2;
    const auto est = ou_mfpt_mc(p);
    const double oracle = ou_mfpt_bvp(p.kappa, p.sigma, p.delta);
    rows.push_back(make_row("mfpt", "mc_vs_bvp",
                            fmt_inputs({{"kappa", kappa}, {"lambda", lambda}}),
                            est.mean, oracle, 0.05 * oracle));
  }

  // The quoted closed forms are evaluated and reported next to the oracle.
  {
    const double kappa = 1.0, sigma = 1.0, delta = 1.0;
    const double oracle = ou_mfpt_bvp(kappa, sigma, delta);
    rows.push_back(make_flag("mfpt", "closed_form_bt_vs_bvp", "kappa=sigma=delta=1",
                             mfpt_closed_bt(kappa, sigma, delta), oracle,
                             "reported side by side; not asserted"));
    rows.push_back(make_flag("mfpt", "closed_form_szt_vs_bvp", "kappa=sigma=delta=1",
                             mfpt_closed_szt(kappa), oracle,
                             "reported side by side; not asserted"));
    rows.push_back(make_flag("mfpt", "closed_form_ratio", "lambda=1",
                             mfpt_ratio(1.0), mfpt_closed_bt(kappa, sigma, delta) / mfpt_closed_szt(kappa),
                             "ratio of the two quoted forms"));
  }
  {
    bool increasing = true;
    double prev = mfpt_ratio(1.0);
    for (double lam = 1.1; lam <= 3.0 + 1e-9; lam += 0.1) {
      const double cur = mfpt_ratio(lam);
      if (cur <= prev) increasing = false;
      prev = cur;
    }
    rows.push_back(make_row("mfpt", "ratio_monotone_above_one", "lambda in [1,3]",
                            increasing ? 1.0 : 0.0, 1.0, 0.0));
  }

  // Renewal waiting times.
  {
    const Prior lap = Prior::laplace(1.0);
    const auto est = renewal_mc(StepDist::deterministic(0.1), lap, kSqrt2, 100000, 4242);
    const double pf = phi_f(lap, kSqrt2, 0.1);
    const double pr = phi_r(lap, kSqrt2, 0.1);
    rows.push_back(make_row("mfpt", "renewal_mean_tf", "s=0.1", est.mean_t_f, 1.0 / pf, 3.0 * est.se_t_f));
    rows.push_back(make_row("mfpt", "renewal_mean_tr", "s=0.1", est.mean_t_r, 1.0 / pr, 3.0 * est.se_t_r));
    const double geo_var = (1.0 - pf) / (pf * pf);
    rows.push_back(make_row("mfpt", "renewal_geometric_variance", "s=0.1",
                            est.var_t_f, geo_var, 0.10 * geo_var));
  }
  return rows;
}

std::vector<CheckRow> suite_snr() {
  std::vector<CheckRow> rows;
  RandomSource rng(5150);

  // Packed matrix-vector multiply against the dense decoded oracle.
  {
    std::vector<double> w(32 * 64);
    for (auto& v : w) v = rng.laplace(0.7);
    LayerQuantConfig cfg;
    cfg.threshold_rule = ThresholdRule::sigma();
    const auto t = quantize_tensor(w, {32, 64}, cfg);
    std::vector<double> x(64);
    for (auto& v : x) v = rng.normal();
    const auto y = ternary_gemm(t, x, 2);
    const auto codes = t.codes();
    bool exact = true;
    for (int i = 0; i < 32; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 64; ++j) {
        acc += double(numeric_value(codes[std::size_t(i * 64 + j)])) * x[std::size_t(j)];
      }
      exact = exact && acc * t.scales[0] == y[std::size_t(i)];
    }
    rows.push_back(make_row("snr", "gemm_matches_dense_oracle", "32x64", exact ? 1.0 : 0.0, 1.0, 0.0));
  }

  // Stacked error propagation formula against Monte Carlo injection.
  {
    LinearStack stack;
    const std::vector<std::int64_t> dims = {8, 16, 12, 4};
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      Matrix m(dims[l + 1], dims[l]);
      for (auto& v : m.a) v = rng.normal() / std::sqrt(double(dims[l]));
      stack.weights.push_back(std::move(m));
      stack.biases.emplace_back(std::size_t(dims[l + 1]), 0.1);
    }
    const double eps_var = 0.09;
    const double formula = stacked_error_variance(stack, eps_var);
    const double mc = stacked_error_variance_mc(stack, eps_var, 100000, 31337, 2);
    rows.push_back(make_row("snr", "stack_formula_vs_mc", "L=3", mc, formula, 0.05 * formula));

    const auto snr = stacked_snr_mc(stack, 0.35, 200, 2024);
    rows.push_back(make_row("snr", "bt_szt_outputs_bit_identical", "L=3",
                            snr.outputs_bit_identical ? 1.0 : 0.0, 1.0, 0.0));
    rows.push_back(make_row("snr", "bt_szt_variance_equal", "L=3", snr.var_bt, snr.var_szt, 0.0));
  }
  return rows;
}

std::vector<CheckRow> suite_repro() {
  std::vector<CheckRow> rows;
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.dataset_size = 128;
  cfg.seed = 7;

  for (SteKind kind : {SteKind::BT, SteKind::SZT}) {
    cfg.ste = kind;
    cfg.threads = 1;
    const auto a = train(cfg);
    const auto b = train(cfg);
    cfg.threads = 4;
    const auto c = train(cfg);
    const std::string name = ste_name(kind);
    rows.push_back(make_row("repro", name + "_digest_rerun", "seed=7",
                            a.checkpoint_digest == b.checkpoint_digest ? 1.0 : 0.0, 1.0, 0.0));
    rows.push_back(make_row("repro", name + "_digest_threads_1_vs_4", "seed=7",
                            a.checkpoint_digest == c.checkpoint_digest ? 1.0 : 0.0, 1.0, 0.0));
    if (kind == SteKind::BT) {
      rows.push_back(make_row("repro", "bt_no_sign_transitions", "seed=7",
                              double(a.representational_transitions), 0.0, 0.0));
    } else {
      rows.push_back(make_row("repro", "szt_sign_transitions_present", "seed=7",
                              a.representational_transitions > 0 ? 1.0 : 0.0, 1.0, 0.0));
    }
  }

  // Stochastic rounding with two different streams diverges.
  cfg.ste = SteKind::SR;
  cfg.threads = 1;
  cfg.seed = 7;
  const auto r1 = train(cfg);
  cfg.seed = 8;
  const auto r2 = train(cfg);
  rows.push_back(make_row("repro", "sr_two_streams_differ", "seeds 7 vs 8",
                          r1.checkpoint_digest != r2.checkpoint_digest ? 1.0 : 0.0, 1.0, 0.0));
  return rows;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  return {"sensitivity", "entropy", "mse", "pacbayes", "mfpt", "snr", "repro", "all"};
}

std::vector<CheckRow> run_verify_suite(const std::string& suite) {
  if (suite == "sensitivity") return suite_sensitivity();
  if (suite == "entropy") return suite_entropy();
  if (suite == "mse") return suite_mse();
  if (suite == "pacbayes") return suite_pacbayes();
  if (suite == "mfpt") return suite_mfpt();
  if (suite == "snr") return suite_snr();
  if (suite == "repro") return suite_repro();
  if (suite == "all") {
    std::vector<CheckRow> rows;
    for (const auto& name : verify_suite_names()) {
      if (name == "all") continue;
      append(rows, run_verify_suite(name));
    }
    return rows;
  }
  throw std::invalid_argument("unknown verify suite: " + suite);
}

std::vector<std::string> analyze_table_names() {
  return {"sensitivity", "dzmse", "mse", "entropy", "mgf", "pacbayes", "mfpt"};
}

std::vector<CheckRow> run_analyze_table(const std::string& quantity) {
  std::vector<CheckRow> rows;
  const Prior lap = Prior::laplace(1.0);
  const Prior gauss = Prior::gaussian(1.0);

  if (quantity == "sensitivity") {
    const double delta = kSqrt2;
    for (double s = 0.1; s <= 1.0 + 1e-9; s += 0.1) {
      const double pf = phi_f(lap, delta, s);
      const double pf_q = 2.0 * integrate([&](double w) { return lap.pdf(w); }, delta - s, delta, 1e-12);
      rows.push_back(make_row("sensitivity", "phi_f", fmt_inputs({{"b", 1.0}, {"delta", delta}, {"s", s}}), pf, pf_q, 1e-8));
      const double pr = phi_r(lap, delta, s);
      const double pr_q = 2.0 * integrate([&](double w) { return lap.pdf(w); }, 0.0, s, 1e-12);
      rows.push_back(make_row("sensitivity", "phi_r", fmt_inputs({{"b", 1.0}, {"delta", delta}, {"s", s}}), pr, pr_q, 1e-8));
    }
    return rows;
  }
  if (quantity == "dzmse") {
    for (double k = 0.5; k <= 2.0 + 1e-9; k += 0.25) {
      rows.push_back(make_row("dzmse", "laplace", fmt_inputs({{"k", k}}),
                              avg_dead_zone_mse(lap, k), avg_dead_zone_mse_quadrature(lap, k), 1e-6));
      rows.push_back(make_row("dzmse", "gaussian", fmt_inputs({{"k", k}}),
                              avg_dead_zone_mse(gauss, k), avg_dead_zone_mse_quadrature(gauss, k), 1e-6));
    }
    return rows;
  }
  if (quantity == "mse") {
    for (double d = 0.4; d <= 2.8 + 1e-9; d += 0.4) {
      const double closed = mse_forward(lap, d);
      const double quad =
          integrate([&](double w) { const double e = w + d; return e * e * lap.pdf(w); }, -kInf, -d, 1e-12) +
          integrate([&](double w) { return w * w * lap.pdf(w); }, -d, d, 1e-12) +
          integrate([&](double w) { const double e = w - d; return e * e * lap.pdf(w); }, d, kInf, 1e-12);
      rows.push_back(make_row("mse", "laplace_forward", fmt_inputs({{"delta", d}}), closed, quad, 1e-8));
    }
    return rows;
  }
  if (quantity == "entropy") {
    for (int i = 0; i <= 10; ++i) {
      const double p0 = double(i) / 10.0;
      rows.push_back(make_row("entropy", "gap", fmt_inputs({{"p0", p0}}),
                              entropy_szt(p0) - entropy_bt(p0), entropy_gap(p0), 2e-15));
    }
    return rows;
  }
  if (quantity == "mgf") {
    const double delta = kSqrt2;
    for (double s0 : {0.05, 0.1, 0.2}) {
      rows.push_back(make_row("mgf", "deterministic_reduction", fmt_inputs({{"s0", s0}}),
                              expected_ratio(StepDist::deterministic(s0), 1.0, delta),
                              sensitivity_ratio(lap, delta, s0).ratio, 1e-12));
    }
    {
      RandomSource rng(99);
      const auto exp_step = StepDist::exponential_truncated(0.05, delta);
      std::vector<double> draws(1000000);
      for (auto& d : draws) d = exp_step.sample(rng);
      const auto emp = StepDist::empirical(std::move(draws));
      const double closed = expected_ratio(exp_step, 1.0, delta);
      rows.push_back(make_row("mgf", "exponential_vs_mc", "mean=0.05 n=1e6",
                              expected_ratio(emp, 1.0, delta), closed, 0.005 * closed));
    }
    return rows;
  }
  if (quantity == "pacbayes") {
    for (double p0 : {0.1, 0.25, 0.5}) {
      rows.push_back(make_row("pacbayes", "gap", fmt_inputs({{"p0", p0}}),
                              pac_bayes_gap(1e6, p0, 100000),
                              std::sqrt(1e6 * p0 * std::log(2.0) / (2.0 * 99999.0)), 1e-15));
      const auto kl = kl_categorical_pair(p0, 0.4);
      rows.push_back(make_row("pacbayes", "categorical_reduction", fmt_inputs({{"p0", p0}}),
                              kl.kl_bt - kl.kl_szt, p0 * std::log(2.0), 1e-12));
    }
    return rows;
  }
  if (quantity == "mfpt") {
    for (double lam = 0.5; lam <= 2.0 + 1e-9; lam += 0.5) {
      const double kappa = 1.0, sigma = 1.0;
      const double delta = lam * sigma / kappa;
      rows.push_back(make_flag("mfpt", "closed_bt_vs_bvp", fmt_inputs({{"lambda", lam}}),
                               mfpt_closed_bt(kappa, sigma, delta), ou_mfpt_bvp(kappa, sigma, delta),
                               "reported; see open notes"));
      rows.push_back(make_flag("mfpt", "closed_szt_vs_bvp", fmt_inputs({{"lambda", lam}}),
                               mfpt_closed_szt(kappa), ou_mfpt_bvp(kappa, sigma, delta),
                               "reported; see open notes"));
    }
    return rows;
  }
  throw std::invalid_argument("unknown analyze quantity: " + quantity);
}

}  // namespace szt
