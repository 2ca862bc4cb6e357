#pragma once

#include <functional>
#include <string>
#include <vector>

#include "inflow/flux_system.hpp"
#include "inflow/slab1d.hpp"
#include "inflow/transport1d.hpp"

namespace inflow {

/// Quasilinear inflow problem for a perturbation V about the base state.
/// b[i] is the inflow datum of the i-th characteristic family, imposed on the
/// side determined by the sign of lambda_i at the base state.
struct SystemProblem {
  FluxSystem system;
  std::function<Eigen::VectorXd(double)> V0;        // x -> R^n
  std::function<Eigen::VectorXd(double)> V0_prime;  // optional (norm audits)
  std::vector<std::function<double(double)>> b;
  std::vector<std::function<double(double)>> b_prime;
  double eps0_budget = 0.01;
};

struct OuterConfig {
  int l_max = 8;
  double horizon = 50.0;
  int grid_n = 256;
  double dt = 0.05;
  double delta = 0.05;       // norm budget carried between levels
  double tol_outer = 1e-9;
  double tol_inner = 1e-12;
  int j_max = 40;
  MildOptions mild;
};

struct LevelDiagnostics {
  int level = 0;
  int inner_iters = 0;
  std::vector<double> inner_ratios;
  double d_norm = 0.0;           // sup |T*^-1 (V^{l+1} - V^l)|
  double outer_ratio = 0.0;
  double induction_norm = 0.0;   // sum_j ||d_t^j V||_{W^{1-j,inf}} + trace
  double vstar_dist = 0.0;       // ||V* - V||_inf
  double vstar_c2 = 0.0;
  double g_over_dtv = 0.0;       // ||g||_inf / ||dt V||_inf
  double min_abs_lambda = 0.0;
};

struct OuterResult {
  VectorSlab1D V;  // n components
  VectorSlab1D f;
  std::vector<LevelDiagnostics> levels;
  bool converged = false;
  double data_norm = 0.0;
  double response_norm = 0.0;
  double stability_constant = 0.0;
  std::vector<double> times;
  std::vector<double> norm_series;       // per time: ||V||_W1inf + ||dtV||_inf
  std::vector<double> max_grad_series;   // per time: ||dx V||_inf
};

/// Mollified frozen-coefficient iteration with per-family mild transport
/// solves. Throws StabilityBudgetError when the between-level norm budget is
/// violated and SolverDivergenceError when either iteration stops
/// contracting.
OuterResult outer_solve(const SystemProblem& problem, const OuterConfig& config);

/// Good-unknown fields for a converged level:
///   g = dt f + T*^-1 (dt T*) f,   dtV = T* g,   dxV = -A*^-1 dtV.
struct GoodUnknownFields {
  VectorSlab1D g;
  VectorSlab1D dtV;
  VectorSlab1D dxV;
  double g_sup = 0.0, dtv_sup = 0.0, dxv_sup = 0.0;
};

struct ShockContrastReport {
  double t_star = 0.0;            // periodic crossing time (bisection detector)
  double grad_ratio_max = 0.0;    // inflow run: max_t ||dxV|| / ||dxV0||
  std::vector<double> times;
  std::vector<double> inflow_max_grad;
};

/// Periodic characteristic-crossing detector: earliest t at which adjacent
/// characteristics of u0(x) = base + amp*sin(mode*pi*x) cross, by bisection.
double periodic_crossing_time(double base, double amp, int mode, int samples = 8192,
                              double rel_tol = 1e-6);

/// Contrast between the periodic blow-up and the bounded inflow run with the
/// matched compatible datum V0 = amp*sin(mode*pi*x).
ShockContrastReport shock_contrast(double amp, int mode, double horizon_factor = 3.0,
                                   OuterConfig config = {});

}  // namespace inflow
