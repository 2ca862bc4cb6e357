#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "inflow/ode.hpp"

namespace inflow {

/// Sign-definite transport speed on [0,inf) x [-1,1] with declared bounds.
/// `lambda_m` is a positive lower bound for |lambda|; `sign` is the constant
/// sign of lambda. Evaluation must be re-entrant.
struct SpeedField1D {
  std::function<double(double, double)> eval;  // (t, x)
  double lambda_m = 1.0;
  double lip_bound = 0.0;
  int sign = +1;

  double inflow_x() const { return sign > 0 ? -1.0 : 1.0; }
  double outflow_x() const { return sign > 0 ? 1.0 : -1.0; }
};

SpeedField1D constant_speed(double lambda);

enum class Region { QPlus, QMinus, Gamma };

/// Backward exit data for a space-time point.
struct ExitRecord {
  double t_b = 0.0;
  double x_b = 0.0;
  Region region = Region::QPlus;
};

struct TraceResult {
  double position = 0.0;
  bool exited = false;
  double exit_time = 0.0;
};

struct TraceOptions {
  double ode_tol = 1e-10;
  double tol_gamma = 1e-9;
};

/// Position of the characteristic through (t,x) at time tau <= t; reports an
/// exit if the curve leaves [-1,1] first.
TraceResult trace(const SpeedField1D& speed, double t, double x, double tau,
                  const TraceOptions& opt = {});

ExitRecord backward_exit(const SpeedField1D& speed, double t, double x,
                         const TraceOptions& opt = {});

/// Exit record plus the dense backward path, parameterized by s = t - tau
/// on [0, t - t_b]; used to integrate forcings along the characteristic.
struct BackwardTrace {
  ExitRecord exit;
  ode::Path<1> path;  // path.at(s)[0] = X(t - s)
  double s_exit = 0.0;
};

BackwardTrace backward_exit_with_path(const SpeedField1D& speed, double t, double x,
                                      const TraceOptions& opt = {});

/// Samples of the corner characteristic emanating from (0, inflow corner),
/// until it exits at the outflow side or reaches t_max.
std::vector<std::pair<double, double>> gamma_curve(const SpeedField1D& speed, double t_max,
                                                   int samples,
                                                   const TraceOptions& opt = {});

}  // namespace inflow
