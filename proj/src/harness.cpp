#include "inflow/harness.hpp"

#include <chrono>
#include <cmath>

#include "inflow/errors.hpp"
#include "inflow/presets.hpp"

namespace inflow {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void validate_grid_1d(int n) {
  if (!power_of_two(n) || n < 16 || n > 1024)
    throw ConfigError("1d grid size must be a power of two in [16, 1024], got " +
                      std::to_string(n));
}

void validate_grid_3d(int n) {
  if (!power_of_two(n) || n < 16 || n > 64)
    throw ConfigError("3d grid size must be a power of two in [16, 64], got " +
                      std::to_string(n));
}

void require_positive(const nlohmann::json& cfg, const char* key) {
  if (cfg.contains(key) && cfg[key].get<double>() <= 0.0)
    throw ConfigError(std::string(key) + " must be positive");
}

std::string timestamp_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

SpeedField1D speed_from(const nlohmann::json& j) {
  return presets::speed(j.value("name", "unit"), j.value("a", 1.0), j.value("b", 0.0));
}

std::function<double(double)> fn_from(const nlohmann::json& j) {
  return presets::scalar1d(j.value("name", "zero"), j.value("amp", 1.0), j.value("mode", 1));
}

SolveReport run_transport1d(nlohmann::json cfg) {
  if (cfg.value("preset", "") == "flush-test") {
    cfg["speed"] = {{"name", "unit"}};
    cfg["f0"] = {{"name", "sine"}, {"amp", 1.0}};
    cfg["b"] = {{"name", "zero"}};
    cfg["h"] = {{"name", "zero"}};
    cfg["horizon"] = 3.0;
  }
  const int n = cfg.value("grid_n", 256);
  validate_grid_1d(n);
  require_positive(cfg, "horizon");
  const double horizon = cfg.value("horizon", 4.0);
  const int samples = cfg.value("time_samples", 50);

  TransportProblem1D p;
  p.speed = speed_from(cfg.value("speed", nlohmann::json{{"name", "unit"}}));
  p.f0 = fn_from(cfg.value("f0", nlohmann::json{{"name", "zero"}}));
  p.b = fn_from(cfg.value("b", nlohmann::json{{"name", "zero"}}));
  nlohmann::json hj = cfg.value("h", nlohmann::json{{"name", "zero"}});
  const bool has_h = hj.value("name", "zero") != "zero";
  if (has_h) {
    auto hf = fn_from(hj);
    p.h = [hf](double, double x) { return hf(x); };
  }
  WeightParams wp = default_weight(p.speed);
  if (cfg.contains("alpha")) wp.alpha = cfg["alpha"].get<double>();

  SolveReport rep;
  const double flush_time = 2.0 / p.speed.lambda_m;
  double sup_after_flush = 0.0;
  for (int k = 1; k <= samples; ++k) {
    double t = horizon * k / samples;
    ScalarField1D f = solve_mild(p, t, n);
    rep.time_axis.push_back(t);
    rep.series["sup_wf"].push_back(f.weighted_sup_norm(wp.alpha, p.speed.sign));
    rep.series["flush_flag"].push_back(t > flush_time ? 1.0 : 0.0);
    if (t > flush_time && !has_h) sup_after_flush = std::max(sup_after_flush, f.sup_norm());
  }
  EstimateReport est = check_weighted_sup_estimate(p, wp, horizon, n, samples);
  rep.series["bound_rhs"] = std::vector<double>(static_cast<std::size_t>(samples), est.rhs);
  rep.add_verdict("weighted_sup_estimate", est.pass,
                  {{"lhs", est.lhs}, {"rhs", est.rhs}, {"margin", est.margin}});
  bool zero_inflow = cfg.value("b", nlohmann::json{{"name", "zero"}}).value("name", "zero") ==
                     "zero";
  if (zero_inflow && !has_h && horizon > flush_time)
    rep.add_verdict("finite_flush", sup_after_flush <= 1e-12,
                    {{"sup_after_flush", sup_after_flush}, {"flush_time", flush_time}});
  return rep;
}

SolveReport run_hyp1d(nlohmann::json cfg) {
  if (cfg.value("preset", "") == "burgers-small") {
    cfg["system"] = "burgers";
    cfg["amplitude"] = 1e-2;
    if (!cfg.contains("horizon")) cfg["horizon"] = 10.0;
    if (!cfg.contains("grid_n")) cfg["grid_n"] = 256;
  }
  const int n = cfg.value("grid_n", 256);
  validate_grid_1d(n);
  require_positive(cfg, "horizon");
  require_positive(cfg, "dt");
  require_positive(cfg, "delta");

  const std::string system = cfg.value("system", "burgers");
  const double amp = cfg.value("amplitude", 1e-2);

  SystemProblem pb;
  if (system == "burgers") {
    pb = presets::burgers_bump(amp, cfg.value("eps0", 0.05));
  } else {
    throw ConfigError("hyp1d: no shipped datum for system '" + system +
                      "'; use the library interface for custom problems");
  }

  OuterConfig oc;
  oc.grid_n = n;
  oc.horizon = cfg.value("horizon", 10.0);
  oc.dt = cfg.value("dt", 0.05);
  oc.l_max = cfg.value("l_max", 8);
  oc.delta = cfg.value("delta", 0.05);
  oc.tol_outer = cfg.value("tol_outer", 1e-9);
  oc.tol_inner = cfg.value("tol_inner", 1e-12);

  OuterResult r = outer_solve(pb, oc);

  SolveReport rep;
  rep.time_axis = r.times;
  rep.series["norm_sum"] = r.norm_series;
  rep.series["max_grad"] = r.max_grad_series;
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& lv : r.levels)
    levels.push_back({{"level", lv.level},
                      {"inner_iters", lv.inner_iters},
                      {"inner_ratios", lv.inner_ratios},
                      {"d_norm", lv.d_norm},
                      {"outer_ratio", lv.outer_ratio},
                      {"induction_norm", lv.induction_norm},
                      {"vstar_dist", lv.vstar_dist},
                      {"vstar_c2", lv.vstar_c2},
                      {"min_abs_lambda", lv.min_abs_lambda}});
  rep.meta["levels"] = levels;
  rep.meta["stability_constant"] = r.stability_constant;
  rep.add_verdict("stability_bound", r.stability_constant <= 10.0,
                  {{"constant", r.stability_constant},
                   {"data_norm", r.data_norm},
                   {"response_norm", r.response_norm}});
  rep.add_verdict("outer_converged_or_capped", true,
                  {{"converged", r.converged},
                   {"final_d_norm", r.levels.empty() ? 0.0 : r.levels.back().d_norm}});
  return rep;
}

SolveReport run_pipe3d(nlohmann::json cfg) {
  const int n = cfg.value("grid_n", 32);
  validate_grid_3d(n);
  require_positive(cfg, "horizon");
  require_positive(cfg, "dt");

  nlohmann::json pj = cfg.value("profile", nlohmann::json{{"name", "product-cosine"}});
  ShearProfile profile =
      presets::shear(pj.value("name", "product-cosine"), pj.value("c", 2.0), pj.value("k", 1));

  nlohmann::json bj = cfg.value("bdata", nlohmann::json{{"name", "bump-pulse"}});
  const double scale = bj.value("scale", 1e-3);
  presets::PipeCase pc = bj.value("name", "bump-pulse") == "pulse"
                             ? presets::pipe_pulse(scale)
                             : presets::pipe_bump_and_pulse(scale);

  EulerConfig ec;
  ec.grid_n = n;
  ec.horizon = cfg.value("horizon", 10.0);
  ec.dt = cfg.value("dt", 0.05);
  ec.p = cfg.value("p", 4.0);
  ec.n_max = cfg.value("n_max", 8);
  ec.l_max_inner = cfg.value("l_max_inner", 3);

  Grid3 g{n};
  CompatReport compat = check_compatibility(profile, pc.bdata, pc.v0, pc.omega0, g, ec.horizon);
  EulerResult r = euler_solve(profile, pc.bdata, pc.v0, pc.omega0, ec);

  SolveReport rep;
  rep.time_axis = r.series.times;
  rep.series["v_w2p"] = r.series.v_w2p;
  rep.series["dtv_w1p"] = r.series.dtv_w1p;
  rep.series["omega_w1p"] = r.series.omega_w1p;
  rep.series["div_omega_lp"] = r.series.div_omega_lp;
  rep.series["omega_tangential_sup"] = r.series.omega_tangential_sup;
  rep.series["momentum_residual_lp"] = r.series.momentum_residual_lp;
  rep.meta["outer_dists"] = r.outer_dists;
  rep.meta["outer_ratios"] = r.outer_ratios;
  rep.meta["stability_constant"] = r.stability_constant;
  rep.meta["c1"] = r.c1;
  rep.meta["c2"] = r.c2;
  rep.meta["smallness_ratio"] = r.smallness_ratio;
  rep.add_verdict("compatibility", compat.all_pass(), {{"conditions", compat.conditions.size()}});
  rep.add_verdict("div_omega_monitor", r.max_div_omega <= 5.0 * r.div_scale,
                  {{"max", r.max_div_omega}, {"scale", r.div_scale}});
  rep.add_verdict("tangential_monitor", r.max_tangential <= 5.0 * r.tangential_scale,
                  {{"max", r.max_tangential}, {"scale", r.tangential_scale}});
  rep.add_verdict("momentum_monitor", r.max_momentum_residual <= 5.0 * r.momentum_scale,
                  {{"max", r.max_momentum_residual}, {"scale", r.momentum_scale}});
  return rep;
}

SolveReport run_divcurl(nlohmann::json cfg) {
  std::vector<int> grids = cfg.value("grids", std::vector<int>{16, 32});
  for (int n : grids) validate_grid_3d(n);
  const double p = cfg.value("p", 4.0);

  auto vfun = [](double x1, double x2, double x3) {
    constexpr double pi = 3.14159265358979323846;
    double s1 = std::sin(pi * x1), s2 = std::sin(pi * x2), s3 = std::sin(pi * x3);
    double c2 = std::cos(pi * x2), c3 = std::cos(pi * x3);
    return Eigen::Vector3d(0.0, pi * s1 * s2 * c3, -pi * s1 * c2 * s3);
  };
  auto wfun = [](double x1, double x2, double x3) {
    constexpr double pi = 3.14159265358979323846;
    double s1 = std::sin(pi * x1), s2 = std::sin(pi * x2), s3 = std::sin(pi * x3);
    double c1 = std::cos(pi * x1), c2 = std::cos(pi * x2), c3 = std::cos(pi * x3);
    return Eigen::Vector3d(2 * pi * pi * s1 * s2 * s3, pi * pi * c1 * c2 * s3,
                           pi * pi * c1 * s2 * c3);
  };

  SolveReport rep;
  std::vector<double> errs, dxs;
  for (int n : grids) {
    Grid3 g{n};
    VecField3 omega = sample_vector(g, wfun);
    VecField3 vex = sample_vector(g, vfun);
    Face2 vb = Face2::Zero(g.n, g.n);
    DivCurlResult r = divcurl_solve(g, omega, vb, vb, {1e-8, p});
    VecField3 diff{r.v[0] - vex[0], r.v[1] - vex[1], r.v[2] - vex[2]};
    errs.push_back(lp_norm(g, diff, p));
    dxs.push_back(g.dx());
    rep.series["grid"].push_back(n);
    rep.series["lp_error"].push_back(errs.back());
    rep.series["curl_residual_rel"].push_back(r.curl_residual_rel);
    rep.series["div_v_lp"].push_back(r.div_v_lp);
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    double order = std::log(errs[i - 1] / errs[i]) / std::log(dxs[i - 1] / dxs[i]);
    rep.series["order"].push_back(order);
    rep.add_verdict("order_" + std::to_string(i), order >= 1.7 && order <= 2.3,
                    {{"order", order}});
  }
  return rep;
}

}  // namespace

SolveReport run_experiment(const std::string& module, const nlohmann::json& config,
                           std::uint64_t seed) {
  SolveReport rep;
  if (module == "transport1d")
    rep = run_transport1d(config);
  else if (module == "hyp1d")
    rep = run_hyp1d(config);
  else if (module == "pipe3d")
    rep = run_pipe3d(config);
  else if (module == "divcurl")
    rep = run_divcurl(config);
  else
    throw ConfigError("unknown module: " + module);

  rep.meta["module"] = module;
  rep.meta["config"] = config;
  rep.meta["config_hash"] = config_hash(config);
  rep.meta["seed"] = seed;
  rep.meta["code_version"] = "inflowlab 1.0.0";
  rep.meta["timestamp"] = timestamp_now();
  return rep;
}

}  // namespace inflow
