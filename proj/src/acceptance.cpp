#include "inflow/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "inflow/presets.hpp"
#include "inflow/report.hpp"

namespace inflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

struct Check {
  nlohmann::json to_json() const {
    return {{"id", id}, {"pass", pass}, {"value", value}, {"threshold", threshold}};
  }
  std::string id;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

Check leq(const std::string& id, double value, double threshold) {
  return {id, value, threshold, value <= threshold};
}

CriterionResult finish(int id, const std::string& name, double budget, Clock::time_point t0,
                       std::vector<Check> checks) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.budget_seconds = budget;
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  checks.push_back(leq("runtime_seconds", r.seconds, budget));
  r.pass = true;
  r.details = nlohmann::json::array();
  for (const auto& c : checks) {
    r.pass = r.pass && c.pass;
    r.details.push_back(c.to_json());
  }
  return r;
}

// ---------------------------------------------------------------------------

CriterionResult c1_transport_exactness() {
  auto t0 = Clock::now();
  std::vector<Check> checks;

  {
    TransportProblem1D p;
    p.speed = constant_speed(1.0);
    p.f0 = [](double x) { return std::sin(kPi * x); };
    p.b = [](double) { return 0.0; };
    ScalarField1D f = solve_mild(p, 0.5, 256);
    double worst = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      double x = f.node(i);
      double exact = x - 0.5 >= -1.0 ? std::sin(kPi * (x - 0.5)) : 0.0;
      worst = std::max(worst, std::abs(f.values[i] - exact));
    }
    checks.push_back(leq("translation_sup_error", worst, 1e-8));
  }
  {
    TransportProblem1D p;
    p.speed = constant_speed(-2.0);
    p.f0 = [](double x) { return std::cos(0.5 * kPi * x); };
    p.b = [](double) { return 0.0; };
    ScalarField1D f = solve_mild(p, 0.4, 256);
    double worst = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      double x = f.node(i);
      double xs = x + 2.0 * 0.4;
      double exact = xs <= 1.0 ? std::cos(0.5 * kPi * xs) : 0.0;
      worst = std::max(worst, std::abs(f.values[i] - exact));
    }
    checks.push_back(leq("negative_speed_sup_error", worst, 1e-8));
  }
  {
    TransportProblem1D p;
    p.speed = constant_speed(1.0);
    p.f0 = [](double) { return 0.0; };
    p.b = [](double) { return 0.0; };
    p.h = [](double, double) { return 1.0; };
    ScalarField1D f = solve_mild(p, 3.0, 256);
    double worst = 0.0;
    for (int i = 0; i < f.size(); ++i)
      worst = std::max(worst, std::abs(f.values[i] - std::min(3.0, f.node(i) + 1.0)));
    checks.push_back(leq("forcing_fill_sup_error", worst, 1e-8));
  }
  return finish(1, "constant-speed mild solutions match closed forms", 1.0, t0, checks);
}

CriterionResult c2_weighted_decay() {
  auto t0 = Clock::now();
  std::vector<Check> checks;

  TransportProblem1D p;
  p.speed = constant_speed(1.0);
  p.f0 = [](double x) { return std::sin(kPi * x); };
  p.b = [](double) { return 0.0; };
  WeightParams wp = default_weight(p.speed);  // alpha lambda_m = 2
  // the datum norm on a fine audit grid: the traced suprema sample w*f0 at
  // points between the coarse nodes, and the continuum bound is tight
  const double wf0 = ScalarField1D::sample(p.f0, 8192).weighted_sup_norm(wp.alpha, +1);

  double worst_decay = 0.0, worst_flush = 0.0;
  for (int k = 1; k <= 50; ++k) {
    double t = 2.5 * k / 50.0;
    ScalarField1D f = solve_mild(p, t, 256);
    double lhs = f.weighted_sup_norm(wp.alpha, +1);
    double bound = std::exp(-wp.alpha * wp.lambda_m * t) * wf0 * (1.0 + 1e-6);
    worst_decay = std::max(worst_decay, lhs - bound);
    if (t > 2.0 / wp.lambda_m) worst_flush = std::max(worst_flush, f.sup_norm());
  }
  checks.push_back(leq("decay_bound_excess", worst_decay, 0.0));
  checks.push_back(leq("flushed_sup_norm", worst_flush, 1e-12));
  return finish(2, "weighted sup decay and finite flush", 5.0, t0, checks);
}

OuterConfig burgers_config(int grid_n, double horizon, int l_max) {
  OuterConfig cfg;
  cfg.grid_n = grid_n;
  cfg.horizon = horizon;
  cfg.dt = 0.05;
  cfg.l_max = l_max;
  return cfg;
}

CriterionResult c3_contraction() {
  auto t0 = Clock::now();
  std::vector<Check> checks;

  // datum with W^{1,inf} norm exactly 1e-2
  const double amp = 1e-2 / (kPi / 2.0);
  SystemProblem pb = presets::burgers_bump(amp);
  OuterConfig cfg = burgers_config(256, 10.0, 5);
  cfg.tol_outer = 1e-16;  // run all five levels; later levels enter the
                          // radius-schedule tail where ratios drift up
  OuterResult r = outer_solve(pb, cfg);

  double worst_outer = 0.0;
  for (std::size_t i = 1; i < r.levels.size(); ++i)
    worst_outer = std::max(worst_outer, r.levels[i].outer_ratio);
  double worst_inner = 0.0;
  bool inner_single_sweep = true;
  for (const auto& lv : r.levels) {
    for (double q : lv.inner_ratios) worst_inner = std::max(worst_inner, q);
    inner_single_sweep = inner_single_sweep && lv.inner_iters == 1;
  }
  checks.push_back(leq("outer_ratio_max_levels_2_to_5", worst_outer, 0.6));
  // the cross-family coupling vanishes identically for a scalar system, so
  // the inner fixed point is reached in one sweep and no ratio exceeds 0.6
  checks.push_back(leq("inner_ratio_max", worst_inner, 0.6));
  Check single{"inner_closes_in_one_sweep", inner_single_sweep ? 1.0 : 0.0, 1.0,
               inner_single_sweep};
  checks.push_back(single);
  return finish(3, "inner and outer iteration contraction", 60.0, t0, checks);
}

CriterionResult c4_global_stability(const std::string& out_dir) {
  auto t0 = Clock::now();
  std::vector<Check> checks;

  SystemProblem pb = presets::burgers_bump(1e-2);
  OuterResult r256 = outer_solve(pb, burgers_config(256, 50.0, 8));
  OuterResult r512 = outer_solve(pb, burgers_config(512, 50.0, 8));

  checks.push_back(
      leq("response_over_data", r256.stability_constant, 10.0));
  double worst = 0.0;
  for (std::size_t m = 0; m < r256.norm_series.size(); ++m)
    worst = std::max(worst, std::abs(r256.norm_series[m] - r512.norm_series[m]));
  checks.push_back(leq("grid_agreement_sup", worst, 1e-4));

  if (!out_dir.empty()) {
    SolveReport rep;
    rep.meta = {{"module", "hyp1d"}, {"criterion", 4}};
    rep.time_axis = r256.times;
    rep.series["norm_sum_n256"] = r256.norm_series;
    rep.series["norm_sum_n512"] = r512.norm_series;
    rep.series["max_grad_n256"] = r256.max_grad_series;
    write_report(rep, out_dir, "acceptance_c4");
  }
  return finish(4, "global W1inf stability bound and grid agreement", 300.0, t0, checks);
}

CriterionResult c5_shock_contrast() {
  auto t0 = Clock::now();
  std::vector<Check> checks;

  OuterConfig cfg = burgers_config(256, 0.0 /*set inside*/, 6);
  ShockContrastReport rep = shock_contrast(0.05, 1, 3.0, cfg);
  const double t_formula = 1.0 / (0.05 * kPi);
  checks.push_back(
      leq("crossing_time_rel_error", std::abs(rep.t_star - t_formula) / t_formula, 0.02));
  checks.push_back(leq("inflow_gradient_growth", rep.grad_ratio_max, 3.0));
  return finish(5, "periodic crossing vs bounded inflow gradients", 120.0, t0, checks);
}

CriterionResult c6_lateral_invariance() {
  auto t0 = Clock::now();
  std::vector<Check> checks;

  auto u = presets::lateral_swirl(0.15);  // slow axial drift: paths dwell
  LateralInvarianceReport rep = lateral_invariance_check(u, 10.0, 64, 1e-11);
  Check pts{"points_at_least_200", static_cast<double>(rep.points), 200.0,
            rep.points >= 200};
  checks.push_back(pts);
  checks.push_back(leq("max_drift", rep.max_drift, 1e-8));
  return finish(6, "lateral faces are invariant under tangential fields", 10.0, t0, checks);
}

CriterionResult c7_divcurl_manufactured(const std::string& out_dir) {
  auto t0 = Clock::now();
  std::vector<Check> checks;

  auto vfun = [](double x1, double x2, double x3) {
    double s1 = std::sin(kPi * x1), s2 = std::sin(kPi * x2), s3 = std::sin(kPi * x3);
    double c2 = std::cos(kPi * x2), c3 = std::cos(kPi * x3);
    return Eigen::Vector3d(0.0, kPi * s1 * s2 * c3, -kPi * s1 * c2 * s3);
  };
  auto wfun = [](double x1, double x2, double x3) {
    double s1 = std::sin(kPi * x1), s2 = std::sin(kPi * x2), s3 = std::sin(kPi * x3);
    double c1 = std::cos(kPi * x1), c2 = std::cos(kPi * x2), c3 = std::cos(kPi * x3);
    return Eigen::Vector3d(2.0 * kPi * kPi * s1 * s2 * s3, kPi * kPi * c1 * c2 * s3,
                           kPi * kPi * c1 * s2 * c3);
  };

  double err[2], dx[2], curl_rel[2];
  int gi = 0;
  for (int n : {16, 32}) {
    Grid3 g{n};
    VecField3 omega = sample_vector(g, wfun);
    VecField3 vex = sample_vector(g, vfun);
    Face2 vb = Face2::Zero(g.n, g.n);
    DivCurlResult r = divcurl_solve(g, omega, vb, vb);
    VecField3 diff{r.v[0] - vex[0], r.v[1] - vex[1], r.v[2] - vex[2]};
    err[gi] = lp_norm(g, diff, 4.0);
    curl_rel[gi] = r.curl_residual_rel;
    dx[gi] = g.dx();
    checks.push_back(leq("curl_residual_rel_n" + std::to_string(n), r.curl_residual_rel,
                         5.0 * g.dx() * g.dx()));
    ++gi;
  }
  const double order = std::log(err[0] / err[1]) / std::log(dx[0] / dx[1]);
  Check ord{"convergence_order", order, 2.3, order >= 1.7 && order <= 2.3};
  checks.push_back(ord);

  {
    Grid3 g{16};
    VecField3 zero{Field3::Zero(g.size()), Field3::Zero(g.size()), Field3::Zero(g.size())};
    Face2 one = Face2::Constant(g.n, g.n, 1.0);
    DivCurlResult plug = divcurl_solve(g, zero, one, one);
    double worst = 0.0;
    for (int id = 0; id < g.size(); ++id)
      worst = std::max({worst, std::abs(plug.v[0][id] - 1.0), std::abs(plug.v[1][id]),
                        std::abs(plug.v[2][id])});
    checks.push_back(leq("uniqueness_plug_error", worst, 1e-10));
    Face2 zf = Face2::Zero(g.n, g.n);
    DivCurlResult null = divcurl_solve(g, zero, zf, zf);
    checks.push_back(leq("uniqueness_zero_error", lp_norm(g, null.v, 4.0), 1e-12));
  }

  if (!out_dir.empty()) {
    SolveReport rep;
    rep.meta = {{"module", "divcurl"}, {"criterion", 7}};
    rep.series["grid"] = {16.0, 32.0};
    rep.series["lp_error"] = {err[0], err[1]};
    rep.series["curl_residual_rel"] = {curl_rel[0], curl_rel[1]};
    rep.series["order"] = {order};
    write_report(rep, out_dir, "acceptance_c7");
  }
  return finish(7, "manufactured div-curl convergence and uniqueness", 120.0, t0, checks);
}

CriterionResult c8_coupled_pipe(const std::string& out_dir) {
  auto t0 = Clock::now();
  std::vector<Check> checks;

  auto profile = product_cosine_profile(2.0);
  auto pc = presets::pipe_bump_and_pulse(1e-3);

  EulerConfig cfg;
  cfg.grid_n = 32;
  cfg.horizon = 10.0;
  cfg.dt = 0.05;
  cfg.n_max = 8;
  cfg.l_max_inner = 3;

  {
    Grid3 g{cfg.grid_n};
    CompatReport compat =
        check_compatibility(profile, pc.bdata, pc.v0, pc.omega0, g, cfg.horizon);
    Check c{"compatibility_all_pass", compat.all_pass() ? 1.0 : 0.0, 1.0, compat.all_pass()};
    checks.push_back(c);
  }

  EulerResult r32 = euler_solve(profile, pc.bdata, pc.v0, pc.omega0, cfg);

  checks.push_back(leq("div_omega_over_scale", r32.max_div_omega / r32.div_scale, 5.0));
  checks.push_back(
      leq("tangential_over_scale", r32.max_tangential / r32.tangential_scale, 5.0));
  checks.push_back(
      leq("momentum_residual_over_scale", r32.max_momentum_residual / r32.momentum_scale, 5.0));

  // contraction rate: the alternation couples transverse differences into the
  // axial component one stage later, so single ratios oscillate; the decay
  // rate is the geometric mean over the post-transient ratios
  double geo = 0.0;
  int cnt = 0;
  for (std::size_t i = 1; i < r32.outer_ratios.size(); ++i) {
    if (r32.outer_ratios[i] > 0.0) {
      geo += std::log(r32.outer_ratios[i]);
      ++cnt;
    }
  }
  geo = cnt > 0 ? std::exp(geo / cnt) : 0.0;
  checks.push_back(leq("outer_contraction_rate", geo, 0.6));

  EulerConfig cfg16 = cfg;
  cfg16.grid_n = 16;
  EulerResult r16 = euler_solve(profile, pc.bdata, pc.v0, pc.omega0, cfg16);
  double sup = 1e-300, worst = 0.0;
  for (double x : r32.series.v_w2p) sup = std::max(sup, std::abs(x));
  for (double x : r16.series.v_w2p) sup = std::max(sup, std::abs(x));
  for (std::size_t m = 0; m < r32.series.v_w2p.size(); ++m)
    worst = std::max(worst, std::abs(r32.series.v_w2p[m] - r16.series.v_w2p[m]));
  checks.push_back(leq("w2p_series_grid_stability", worst / sup, 0.10));

  if (!out_dir.empty()) {
    SolveReport rep;
    rep.meta = {{"module", "pipe3d"},
                {"criterion", 8},
                {"stability_constant", r32.stability_constant},
                {"outer_ratios", r32.outer_ratios},
                {"c1", r32.c1},
                {"c2", r32.c2},
                {"smallness_ratio", r32.smallness_ratio},
                {"curl_residual_rel", r32.max_curl_residual_rel}};
    rep.time_axis = r32.series.times;
    rep.series["v_w2p"] = r32.series.v_w2p;
    rep.series["dtv_w1p"] = r32.series.dtv_w1p;
    rep.series["omega_w1p"] = r32.series.omega_w1p;
    rep.series["div_omega_lp"] = r32.series.div_omega_lp;
    rep.series["omega_tangential_sup"] = r32.series.omega_tangential_sup;
    rep.series["momentum_residual_lp"] = r32.series.momentum_residual_lp;
    rep.series["v_w2p_n16"] = r16.series.v_w2p;
    write_report(rep, out_dir, "acceptance_c8");
  }
  return finish(8, "coupled pipe run: monitors, contraction, grid stability", 1800.0, t0,
                checks);
}

CriterionResult c9_compat_checker() {
  auto t0 = Clock::now();
  std::vector<Check> checks;

  Grid3 g{17};
  auto profile = product_cosine_profile(2.0);

  auto clean = presets::pipe_pulse(0.0);
  CompatReport all = check_compatibility(profile, clean.bdata, clean.v0, clean.omega0, g, 5.0);
  Check c0{"zero_perturbation_all_pass", all.all_pass() ? 1.0 : 0.0, 1.0, all.all_pass()};
  checks.push_back(c0);

  auto fluxcase = presets::pipe_pulse(0.0);
  fluxcase.bdata.v_b_minus = [](double, double, double) { return 1.0; };
  fluxcase.bdata.v_b_plus = [](double, double, double) { return 0.0; };
  CompatReport fr =
      check_compatibility(profile, fluxcase.bdata, fluxcase.v0, fluxcase.omega0, g, 5.0);
  const CompatCondition* fc = fr.find("flux_balance");
  bool flux_ok = fc && !fc->pass && std::abs(fc->residual - 4.0) <= 1e-9;
  Check c1{"flux_imbalance_residual_4", fc ? fc->residual : -1.0, 4.0, flux_ok};
  checks.push_back(c1);

  auto axial = presets::pipe_pulse(0.0);
  axial.bdata.omega_b_minus = [](double, double, double) {
    return Eigen::Vector3d(0.1, 0.0, 0.0).eval();
  };
  CompatReport ar = check_compatibility(profile, axial.bdata, axial.v0, axial.omega0, g, 5.0);
  const CompatCondition* ac = ar.find("omega_b1_zero");
  bool ax_ok = ac && !ac->pass && std::abs(ac->residual - 0.1) <= 1e-12;
  Check c2{"axial_vorticity_residual_0p1", ac ? ac->residual : -1.0, 0.1, ax_ok};
  checks.push_back(c2);

  return finish(9, "compatibility checker hand-built verdicts", 1.0, t0, checks);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::set<int>& only,
                                            const std::string& out_dir) {
  std::vector<CriterionResult> out;
  auto want = [&](int k) { return only.empty() || only.count(k) > 0; };
  if (want(1)) out.push_back(c1_transport_exactness());
  if (want(2)) out.push_back(c2_weighted_decay());
  if (want(3)) out.push_back(c3_contraction());
  if (want(4)) out.push_back(c4_global_stability(out_dir));
  if (want(5)) out.push_back(c5_shock_contrast());
  if (want(6)) out.push_back(c6_lateral_invariance());
  if (want(7)) out.push_back(c7_divcurl_manufactured(out_dir));
  if (want(8)) out.push_back(c8_coupled_pipe(out_dir));
  if (want(9)) out.push_back(c9_compat_checker());
  return out;
}

void print_results(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    std::printf("[%s] C%d %s (%.1fs/%.0fs)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.budget_seconds);
    for (const auto& d : r.details)
      if (!d.value("pass", true))
        std::printf("       failed: %s value=%.6g threshold=%.6g\n",
                    d.value("id", std::string("?")).c_str(), d.value("value", 0.0),
                    d.value("threshold", 0.0));
  }
}

}  // namespace inflow
