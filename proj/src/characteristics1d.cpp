#include "inflow/characteristics1d.hpp"

#include <cmath>

#include "inflow/errors.hpp"

namespace inflow {

namespace {

using Vec1 = Eigen::Matrix<double, 1, 1>;

Vec1 vec1(double v) {
  Vec1 y;
  y[0] = v;
  return y;
}

// backward flow in s = t - tau
ode::Path<1> integrate_backward(const SpeedField1D& speed, double t, double x, double s_max,
                                const TraceOptions& opt, bool keep_path) {
  auto rhs = [&](double s, const Vec1& y) { return vec1(-speed.eval(t - s, y[0])); };
  auto events = [](int k, double, const Vec1& y) {
    return k == 0 ? y[0] + 1.0 : 1.0 - y[0];
  };
  ode::Options oopt;
  oopt.tol = opt.ode_tol;
  oopt.keep_path = keep_path;
  return ode::integrate<1>(rhs, 0.0, s_max, vec1(x), oopt, events, 2);
}

}  // namespace

SpeedField1D constant_speed(double lambda) {
  SpeedField1D s;
  s.eval = [lambda](double, double) { return lambda; };
  s.lambda_m = std::abs(lambda);
  s.lip_bound = 0.0;
  s.sign = lambda > 0 ? +1 : -1;
  return s;
}

TraceResult trace(const SpeedField1D& speed, double t, double x, double tau,
                  const TraceOptions& opt) {
  TraceResult r;
  if (tau >= t) {
    r.position = x;
    return r;
  }
  ode::Path<1> p = integrate_backward(speed, t, x, t - tau, opt, false);
  r.position = p.y_end[0];
  if (p.reason == ode::StopReason::Event) {
    r.exited = true;
    r.exit_time = t - p.s_end;
    r.position = p.event_index == 0 ? -1.0 : 1.0;
  }
  return r;
}

BackwardTrace backward_exit_with_path(const SpeedField1D& speed, double t, double x,
                                      const TraceOptions& opt) {
  BackwardTrace out;
  const double x_in = speed.inflow_x();

  if (t <= 0.0) {
    out.exit.t_b = 0.0;
    out.exit.x_b = x;
    out.exit.region = std::abs(x - x_in) <= opt.tol_gamma ? Region::Gamma : Region::QPlus;
    out.s_exit = 0.0;
    return out;
  }
  if (std::abs(x - x_in) < 1e-14) {
    out.exit.t_b = t;
    out.exit.x_b = x_in;
    out.exit.region = Region::QMinus;
    out.s_exit = 0.0;
    return out;
  }

  out.path = integrate_backward(speed, t, x, t, opt, true);
  if (out.path.reason == ode::StopReason::Event) {
    if ((speed.sign > 0) != (out.path.event_index == 0))
      throw SolverDivergenceError("backward_exit: exit through the outflow side");
    out.s_exit = out.path.s_end;
    double t_b = t - out.path.s_end;
    out.exit.t_b = t_b;
    out.exit.x_b = x_in;
    out.exit.region = t_b <= opt.tol_gamma / speed.lambda_m ? Region::Gamma : Region::QMinus;
    if (out.exit.region == Region::Gamma) out.exit.t_b = std::max(t_b, 0.0);
  } else {
    out.s_exit = t;
    double x0 = out.path.y_end[0];
    out.exit.t_b = 0.0;
    out.exit.x_b = x0;
    out.exit.region = std::abs(x0 - x_in) <= opt.tol_gamma ? Region::Gamma : Region::QPlus;
  }
  return out;
}

ExitRecord backward_exit(const SpeedField1D& speed, double t, double x,
                         const TraceOptions& opt) {
  return backward_exit_with_path(speed, t, x, opt).exit;
}

std::vector<std::pair<double, double>> gamma_curve(const SpeedField1D& speed, double t_max,
                                                   int samples, const TraceOptions& opt) {
  const double x0 = speed.inflow_x();
  const double x_out = speed.outflow_x();
  auto rhs = [&](double tau, const Vec1& y) { return vec1(speed.eval(tau, y[0])); };
  // event: reaching the outflow side
  auto ev = [&](int, double, const Vec1& y) {
    return speed.sign > 0 ? 1.0 - y[0] : y[0] + 1.0;
  };
  ode::Options oopt;
  oopt.tol = opt.ode_tol;
  ode::Path<1> p = ode::integrate<1>(rhs, 0.0, t_max, vec1(x0), oopt, ev, 1);

  double tau_end = p.s_end;
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    double tau = tau_end * i / (samples - 1);
    double xv = p.steps.empty() ? x0 : p.at(tau)[0];
    if (i == samples - 1 && p.reason == ode::StopReason::Event) xv = x_out;
    pts.emplace_back(tau, xv);
  }
  return pts;
}

}  // namespace inflow
