#include "inflow/transport1d.hpp"

#include <cmath>

#include "inflow/errors.hpp"
#include "inflow/quadrature.hpp"

namespace inflow {

namespace {

double path_forcing_integral(const TransportProblem1D& p, double t, const BackwardTrace& bt,
                             double quad_tol) {
  if (!p.h || bt.s_exit <= 0.0) return 0.0;
  auto integrand = [&](double s) {
    double xs = bt.path.at(s)[0];
    if (xs > 1.0) xs = 1.0;
    if (xs < -1.0) xs = -1.0;
    return p.h(t - s, xs);
  };
  return quad::adaptive(integrand, 0.0, bt.s_exit, quad_tol);
}

}  // namespace

MildValue solve_mild_point(const TransportProblem1D& p, double t, double x,
                           const MildOptions& opt) {
  BackwardTrace bt = backward_exit_with_path(p.speed, t, x, opt.trace);
  MildValue out;
  out.region = bt.exit.region;
  const double acc = path_forcing_integral(p, t, bt, opt.quad_tol);
  switch (bt.exit.region) {
    case Region::QPlus:
      out.value = p.f0(bt.exit.x_b) + acc;
      break;
    case Region::QMinus:
      out.value = p.b(bt.exit.t_b) + acc;
      break;
    case Region::Gamma: {
      const double from_initial = p.f0(p.speed.inflow_x()) + acc;
      const double from_boundary = p.b(0.0) + acc;
      out.gamma_mismatch = std::abs(from_initial - from_boundary);
      out.value = from_initial;
      break;
    }
  }
  return out;
}

ScalarField1D solve_mild(const TransportProblem1D& p, double t, int grid_n,
                         const MildOptions& opt, MildDiagnostics* diag) {
  ScalarField1D f(grid_n);
  MildDiagnostics d;
  const double dx = 2.0 / (grid_n - 1);
  for (int i = 0; i < grid_n; ++i) {
    MildValue v = solve_mild_point(p, t, -1.0 + i * dx, opt);
    f.values[i] = v.value;
    if (v.region == Region::Gamma) {
      ++d.gamma_points;
      d.max_gamma_mismatch = std::max(d.max_gamma_mismatch, v.gamma_mismatch);
    }
  }
  if (diag) *diag = d;
  return f;
}

std::vector<OutflowSample> trace_at_outflow(const TransportProblem1D& p, double t_max,
                                            int samples, const MildOptions& opt) {
  std::vector<OutflowSample> out;
  out.reserve(static_cast<std::size_t>(samples));
  const double x_out = p.speed.outflow_x();
  for (int i = 0; i < samples; ++i) {
    double t = t_max * i / (samples - 1);
    MildValue v = solve_mild_point(p, t, x_out, opt);
    out.push_back({t, v.value, v.region == Region::Gamma});
  }
  return out;
}

EstimateReport check_weighted_sup_estimate(const TransportProblem1D& p, const WeightParams& wp,
                                           double horizon, int grid_n, int time_samples,
                                           const MildOptions& opt) {
  const int sgn = p.speed.sign;
  EstimateReport rep;
  for (int k = 0; k < time_samples; ++k) {
    double t = horizon * (k + 1) / time_samples;
    ScalarField1D f = solve_mild(p, t, grid_n, opt);
    rep.lhs = std::max(rep.lhs, f.weighted_sup_norm(wp.alpha, sgn));
  }

  double wf0 = 0.0, wb = 0.0, wh = 0.0;
  const double dx = 2.0 / (grid_n - 1);
  for (int i = 0; i < grid_n; ++i) {
    double x = -1.0 + i * dx;
    wf0 = std::max(wf0, wp.weight(x, sgn) * std::abs(p.f0(x)));
  }
  const double w_in = wp.weight(p.speed.inflow_x(), sgn);
  for (int k = 0; k <= 4 * time_samples; ++k) {
    double t = horizon * k / (4.0 * time_samples);
    wb = std::max(wb, w_in * std::abs(p.b(t)));
    if (p.h)
      for (int i = 0; i < grid_n; ++i) {
        double x = -1.0 + i * dx;
        wh = std::max(wh, wp.weight(x, sgn) * std::abs(p.h(t, x)));
      }
  }
  rep.rhs = std::max(wf0, wb) + wh / (wp.alpha * wp.lambda_m);
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-6);
  return rep;
}

TimeDerivativeSolution solve_time_derivative(const TransportProblem1D& p, double t, int grid_n,
                                             const MildOptions& opt) {
  if (!p.speed_time_independent)
    throw UnsupportedConfigurationError(
        "solve_time_derivative: time-dependent speeds couple the derivative equation to itself; "
        "use the system iteration instead");
  if (!p.f0_prime || !p.b_prime)
    throw PreconditionError("solve_time_derivative: derivative data missing");

  TransportProblem1D q;
  q.speed = p.speed;
  q.f0 = [&p](double x) {
    double v = -p.speed.eval(0.0, x) * p.f0_prime(x);
    if (p.h) v += p.h(0.0, x);
    return v;
  };
  q.b = p.b_prime;
  if (p.h && !p.dt_h)
    throw PreconditionError("solve_time_derivative: dt_h required when h is nonzero");
  q.h = p.dt_h;

  TimeDerivativeSolution sol;
  sol.dt_f = solve_mild(q, t, grid_n, opt);
  sol.dx_f = ScalarField1D(grid_n);
  const double dx = 2.0 / (grid_n - 1);
  for (int i = 0; i < grid_n; ++i) {
    double x = -1.0 + i * dx;
    double hv = p.h ? p.h(t, x) : 0.0;
    sol.dx_f.values[i] = (hv - sol.dt_f.values[i]) / p.speed.eval(t, x);
  }
  return sol;
}

}  // namespace inflow
