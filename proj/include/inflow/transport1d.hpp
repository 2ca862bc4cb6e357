#pragma once

#include <functional>
#include <vector>

#include "inflow/characteristics1d.hpp"
#include "inflow/grid1d.hpp"

namespace inflow {

/// Scalar inflow transport problem on [-1,1]:
///   f_t + lambda f_x = h,  f(0,.) = f0,  f = b on the inflow side.
/// Data are callables; derivative callables are only needed by
/// solve_time_derivative.
struct TransportProblem1D {
  SpeedField1D speed;
  std::function<double(double)> f0;            // x -> value
  std::function<double(double)> b;             // t -> value
  std::function<double(double, double)> h;     // (t,x) -> value; empty = zero
  std::function<double(double)> f0_prime;
  std::function<double(double)> b_prime;
  std::function<double(double, double)> dt_h;  // time derivative of h
  bool speed_time_independent = true;
};

struct WeightParams {
  double alpha = 2.0;
  double lambda_m = 1.0;
  double weight(double x, int sgn) const { return std::exp(-alpha * sgn * x); }
};

/// Default rule for the decay rate when the speed is time-independent.
inline WeightParams default_weight(const SpeedField1D& speed) {
  return WeightParams{2.0 / speed.lambda_m, speed.lambda_m};
}

struct MildValue {
  double value = 0.0;
  Region region = Region::QPlus;
  double gamma_mismatch = 0.0;  // |initial-branch - boundary-branch| on Gamma
};

struct MildDiagnostics {
  double max_gamma_mismatch = 0.0;
  int gamma_points = 0;
};

struct MildOptions {
  TraceOptions trace;
  double quad_tol = 1e-10;
};

MildValue solve_mild_point(const TransportProblem1D& p, double t, double x,
                           const MildOptions& opt = {});

ScalarField1D solve_mild(const TransportProblem1D& p, double t, int grid_n,
                         const MildOptions& opt = {}, MildDiagnostics* diag = nullptr);

struct OutflowSample {
  double t = 0.0;
  double value = 0.0;
  bool on_gamma = false;
};

std::vector<OutflowSample> trace_at_outflow(const TransportProblem1D& p, double t_max,
                                            int samples, const MildOptions& opt = {});

struct EstimateReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool pass = false;
};

/// Checks  sup_t sup_x w|f| <= max(||w f0||, ||w b||) + ||w h|| / (alpha lambda_m)
/// with everything evaluated numerically on the given grid / time samples.
EstimateReport check_weighted_sup_estimate(const TransportProblem1D& p, const WeightParams& wp,
                                           double horizon, int grid_n, int time_samples = 50,
                                           const MildOptions& opt = {});

struct TimeDerivativeSolution {
  ScalarField1D dt_f;
  ScalarField1D dx_f;
};

/// Solves the transport problem satisfied by df/dt (time-independent speeds
/// only) and recovers df/dx = (h - df/dt)/lambda pointwise.
TimeDerivativeSolution solve_time_derivative(const TransportProblem1D& p, double t, int grid_n,
                                             const MildOptions& opt = {});

}  // namespace inflow
