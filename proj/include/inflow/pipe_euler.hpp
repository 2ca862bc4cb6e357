#pragma once

#include <functional>
#include <string>
#include <vector>

#include "inflow/divcurl.hpp"
#include "inflow/shear.hpp"
#include "inflow/transport3d.hpp"

namespace inflow {

/// Uniformly time-sampled multi-component grid fields: t[m][c].
struct TimeSlab {
  double dt = 0.05;
  std::vector<std::vector<Field3>> t;

  int samples() const { return static_cast<int>(t.size()); }
  int comps() const { return t.empty() ? 0 : static_cast<int>(t[0].size()); }
  double horizon() const { return dt * (samples() - 1); }

  static TimeSlab zeros(const Grid3& g, int samples, int comps, double dt);
};

struct PipeBoundaryData {
  std::function<double(double, double, double)> v_b_minus;  // (t, x2, x3)
  std::function<double(double, double, double)> v_b_plus;
  std::function<double(double, double, double)> dt_v_b_minus;
  std::function<double(double, double, double)> dt_v_b_plus;
  std::function<Eigen::Vector3d(double, double, double)> omega_b_minus;
  std::function<Eigen::Vector3d(double, double, double)> dt_omega_b_minus;
};

struct CompatCondition {
  std::string id;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct CompatReport {
  std::vector<CompatCondition> conditions;
  bool all_pass() const;
  const CompatCondition* find(const std::string& id) const;
};

/// Evaluates every structural condition on the data with per-condition
/// residuals; failures are reported, never thrown.
CompatReport check_compatibility(
    const ShearProfile& profile, const PipeBoundaryData& bdata,
    const std::function<Eigen::Vector3d(double, double, double)>& v0,
    const std::function<Eigen::Vector3d(double, double, double)>& omega0, const Grid3& g,
    double horizon, int t_samples = 11, double p = 4.0);

struct VorticityIterateConfig {
  int l_max = 6;
  double tol = 1e-9;
  double p = 4.0;
  Transport3Options transport;
  double trace_step = 0.15;  // fixed RK4 step, capped so one step spans few cells
  bool warm_start = true;    // start from the supplied slab instead of zero
};

struct VorticityIterateResult {
  TimeSlab omega;  // 3 components
  std::vector<double> ratios;
  int iters = 0;
  double estimate_ratio = 0.0;  // response / (data + delta * v-norms), reported
};

/// Lagged-stretching iteration for the vorticity transport driven by a fixed
/// velocity slab (3 components). Throws SolverDivergenceError after three
/// consecutive non-contracting sweeps.
VorticityIterateResult vorticity_iterate(
    const ShearProfile& profile, const Grid3& g, const TimeSlab& v_slab,
    const std::function<Eigen::Vector3d(double, double, double)>& omega0,
    const std::function<Eigen::Vector3d(double, double, double)>& omega_b,
    const VorticityIterateConfig& cfg, const TimeSlab* warm = nullptr);

std::vector<double> div_omega_monitor(const Grid3& g, const TimeSlab& omega, double p);
std::vector<double> tangential_vanish_monitor(const Grid3& g, const TimeSlab& omega);

/// ||dt v + (u_s+v).grad v + v.grad u_s + grad p||_p per interior time sample,
/// with p recovered from its Neumann-Poisson problem.
std::vector<double> momentum_residual(const Grid3& g, const TimeSlab& v,
                                      const ShearProfile& profile, double p);

struct EulerConfig {
  int grid_n = 32;
  double horizon = 10.0;
  double dt = 0.05;
  double p = 4.0;
  int n_max = 8;
  int l_max_inner = 6;
  double tol_outer = 1e-8;
  double tol_inner = 1e-9;
  Transport3Options transport;
  double trace_step = 0.15;
  double profile_delta = 100.0;  // admissibility threshold for the gradient-smallness ratio
};

struct EulerSeries {
  std::vector<double> times;
  std::vector<double> v_w2p, dtv_w1p, omega_w1p;
  std::vector<double> div_omega_lp, omega_tangential_sup, momentum_residual_lp;
};

struct EulerResult {
  EulerSeries series;
  std::vector<double> outer_dists;   // sup_t L2 distance between omega iterates
  std::vector<double> outer_ratios;
  std::vector<std::vector<double>> inner_ratio_history;
  int outer_iterates = 0;            // index of the final iterate (starts at 1)
  bool converged = false;
  double data_norm = 0.0;
  double response_norm = 0.0;        // sup_t (||v||_{W2p} + ||dt v||_{W1p})
  double stability_constant = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double smallness_ratio = 0.0;
  double transport_budget_lhs = 0.0;  // derivative-smallness budget value, reported
  double max_div_omega = 0.0, max_tangential = 0.0, max_momentum_residual = 0.0;
  double div_scale = 0.0;             // dx^2 * sup_t ||omega||_{W1p}
  double tangential_scale = 0.0;      // same scale as div
  double momentum_scale = 0.0;        // (dx^2+dt^2) * sup_t(||v||_{W2p}+||dt v||_{W1p})
  double max_curl_residual_rel = 0.0;
  TimeSlab v, omega;                  // final slabs (3 components each)
};

/// Alternates velocity recovery and vorticity transport from omega = 0,
/// warm-starting each inner iteration at the previous outer iterate.
EulerResult euler_solve(const ShearProfile& profile, const PipeBoundaryData& bdata,
                        const std::function<Eigen::Vector3d(double, double, double)>& v0,
                        const std::function<Eigen::Vector3d(double, double, double)>& omega0,
                        const EulerConfig& cfg);

}  // namespace inflow
