#pragma once

#include <functional>
#include <vector>

#include "inflow/characteristics1d.hpp"  // Region
#include "inflow/errors.hpp"
#include "inflow/grid3d.hpp"
#include "inflow/ode.hpp"

namespace inflow {

struct Trace3Options {
  double ode_tol = 1e-8;
  double tol_gamma = 1e-9;
  double eps = 1e-6;  // lateral regularization u + eps*(0, x2, x3)
};

struct BackwardTrace3 {
  Region region = Region::QPlus;
  double t_b = 0.0;
  Eigen::Vector3d x_b = Eigen::Vector3d::Zero();
  ode::Path<3> path;  // parameterized by s = t - tau
  double s_exit = 0.0;
};

/// Backward characteristic through (t,x) under the laterally regularized
/// field; exits through the inflow face x1 = -1 or reaches tau = 0.
/// `u` is the unregularized velocity (t, x) -> R^3 with u1 >= c1_floor > 0.
template <class U>
BackwardTrace3 trace_backward3(U&& u, double t, const Eigen::Vector3d& x,
                               const Trace3Options& opt, double c1_floor) {
  using Vec3 = Eigen::Matrix<double, 3, 1>;
  BackwardTrace3 out;
  if (t <= 0.0) {
    out.t_b = 0.0;
    out.x_b = x;
    out.region = x[0] <= -1.0 + opt.tol_gamma ? Region::Gamma : Region::QPlus;
    return out;
  }
  if (x[0] <= -1.0 + 1e-14) {
    out.t_b = t;
    out.x_b = x;
    out.x_b[0] = -1.0;
    out.region = Region::QMinus;
    return out;
  }

  const double eps = opt.eps;
  auto rhs = [&](double s, const Vec3& y) -> Vec3 {
    Vec3 v = u(t - s, y);
    v[1] += eps * y[1];
    v[2] += eps * y[2];
    return -v;
  };
  auto ev = [](int, double, const Vec3& y) { return y[0] + 1.0; };
  ode::Options oopt;
  oopt.tol = opt.ode_tol;
  out.path = ode::integrate<3>(rhs, 0.0, t, x, oopt, ev, 1);

  if (out.path.reason == ode::StopReason::Event) {
    out.s_exit = out.path.s_end;
    out.t_b = t - out.path.s_end;
    out.x_b = out.path.y_end;
    out.x_b[0] = -1.0;
    out.region = out.t_b <= opt.tol_gamma / c1_floor ? Region::Gamma : Region::QMinus;
  } else {
    out.s_exit = t;
    out.t_b = 0.0;
    out.x_b = out.path.y_end;
    out.region = out.x_b[0] <= -1.0 + opt.tol_gamma ? Region::Gamma : Region::QPlus;
  }
  return out;
}

namespace detail3 {

// 15-point Kronrod / 7-point Gauss pair for R^3-valued integrands
template <class F>
void gk15_vec(F&& f, double a, double b, Eigen::Vector3d& result, double& err) {
  static constexpr double xk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                                   0.741531185599394, 0.586087235467691, 0.405845151377397,
                                   0.207784955007898, 0.0};
  static constexpr double wk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                                   0.140653259715525, 0.169004726639267, 0.190350578064785,
                                   0.204432940075298, 0.209482141084728};
  static constexpr double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                   0.417959183673469};
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  Eigen::Vector3d fc = f(c);
  Eigen::Vector3d kr = wk[7] * fc;
  Eigen::Vector3d gs = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    Eigen::Vector3d s = f(c - hl * xk[i]) + f(c + hl * xk[i]);
    kr += wk[i] * s;
    if (i % 2 == 1) gs += wg[i / 2] * s;
  }
  result = kr * hl;
  err = ((kr - gs) * hl).cwiseAbs().maxCoeff();
}

template <class F>
Eigen::Vector3d gk_adaptive_vec(F&& f, double a, double b, double tol, int depth = 0) {
  Eigen::Vector3d r;
  double e;
  gk15_vec(f, a, b, r, e);
  if (e <= tol || depth >= 18 || b - a < 1e-13) return r;
  double m = 0.5 * (a + b);
  return gk_adaptive_vec(f, a, m, 0.5 * tol, depth + 1) +
         gk_adaptive_vec(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace detail3

/// Mild value at (t,x):  data at the backward exit plus the forcing
/// integrated along the traced path. H may be a null-like functor (has_h
/// false) to skip the quadrature entirely.
template <class U, class F0, class B, class H>
Eigen::Vector3d mild_value3(U&& u, F0&& f0, B&& b, H&& h, bool has_h, double t,
                            const Eigen::Vector3d& x, const Trace3Options& topt,
                            double quad_tol, double c1_floor, double* gamma_mismatch = nullptr) {
  BackwardTrace3 bt = trace_backward3(u, t, x, topt, c1_floor);
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  if (has_h && bt.s_exit > 0.0) {
    auto integrand = [&](double s) -> Eigen::Vector3d {
      Eigen::Vector3d xs = bt.path.at(s);
      for (int d = 0; d < 3; ++d) xs[d] = std::clamp(xs[d], -1.0, 1.0);
      return h(t - s, xs);
    };
    acc = detail3::gk_adaptive_vec(integrand, 0.0, bt.s_exit, quad_tol);
  }
  switch (bt.region) {
    case Region::QPlus:
      return f0(bt.x_b) + acc;
    case Region::QMinus:
      return b(bt.t_b, bt.x_b[1], bt.x_b[2]) + acc;
    case Region::Gamma: {
      Eigen::Vector3d xb = bt.x_b;
      xb[0] = -1.0;
      Eigen::Vector3d vi = f0(xb) + acc;
      Eigen::Vector3d vb = b(0.0, xb[1], xb[2]) + acc;
      if (gamma_mismatch) *gamma_mismatch = (vi - vb).cwiseAbs().maxCoeff();
      return vi;
    }
  }
  return acc;
}

/// Fixed-step backward evaluation: RK4 with step `hstep` in time-to-go,
/// cubic-Hermite refinement of the inflow-face crossing, and per-step
/// Simpson accumulation of the forcing. The path error is O(hstep^2 x the
/// interpolation kinks of u), far below the grid-scale monitors; the
/// adaptive tracer above remains the reference path.
template <class U, class F0, class B, class H>
Eigen::Vector3d mild_value3_fixed(U&& u, F0&& f0, B&& b, H&& h, bool has_h, double t,
                                  const Eigen::Vector3d& x, double hstep,
                                  const Trace3Options& opt, double c1_floor,
                                  double* gamma_mismatch = nullptr) {
  using Vec3 = Eigen::Vector3d;
  const double eps = opt.eps;
  auto rhs = [&](double s, const Vec3& y) -> Vec3 {
    Vec3 v = u(t - s, y);
    v[1] += eps * y[1];
    v[2] += eps * y[2];
    return -v;
  };

  auto finish = [&](Region region, double t_b, const Vec3& x_b,
                    const Vec3& acc) -> Vec3 {
    switch (region) {
      case Region::QPlus:
        return f0(x_b) + acc;
      case Region::QMinus:
        return b(t_b, x_b[1], x_b[2]) + acc;
      default: {
        Vec3 xb = x_b;
        xb[0] = -1.0;
        Vec3 vi = f0(xb) + acc;
        Vec3 vb = b(0.0, xb[1], xb[2]) + acc;
        if (gamma_mismatch) *gamma_mismatch = (vi - vb).cwiseAbs().maxCoeff();
        return vi;
      }
    }
  };

  Vec3 acc = Vec3::Zero();
  if (t <= 0.0)
    return finish(x[0] <= -1.0 + opt.tol_gamma ? Region::Gamma : Region::QPlus, 0.0, x, acc);
  if (x[0] <= -1.0 + 1e-14) {
    Vec3 xb = x;
    xb[0] = -1.0;
    return finish(Region::QMinus, t, xb, acc);
  }

  double s = 0.0;
  Vec3 X = x;
  Vec3 k1 = rhs(0.0, X);
  Vec3 Fprev = has_h ? Vec3(h(t, X)) : Vec3::Zero();
  while (true) {
    const double hs = std::min(hstep, t - s);
    Vec3 k2 = rhs(s + 0.5 * hs, X + 0.5 * hs * k1);
    Vec3 k3 = rhs(s + 0.5 * hs, X + 0.5 * hs * k2);
    Vec3 k4 = rhs(s + hs, X + hs * k3);
    Vec3 Xn = X + (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Vec3 kend = rhs(s + hs, Xn);

    auto hermite = [&](double th) -> Vec3 {
      const double th1 = 1.0 - th;
      return th1 * th1 * (1.0 + 2.0 * th) * X + th * th * (3.0 - 2.0 * th) * Xn +
             th * th1 * (th1 * hs * k1 - th * hs * kend);
    };

    if (Xn[0] <= -1.0) {
      // refine the crossing on the step's cubic
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60 && (hi - lo) * hs > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        if (hermite(mid)[0] <= -1.0) hi = mid; else lo = mid;
      }
      const double th = 0.5 * (lo + hi);
      const double sx = s + th * hs;
      Vec3 xb = hermite(th);
      xb[0] = -1.0;
      if (has_h) {
        const double hp = th * hs;
        Vec3 Fm = h(t - (s + 0.5 * hp), hermite(0.5 * th));
        Vec3 Fe = h(t - sx, xb);
        acc += (hp / 6.0) * (Fprev + 4.0 * Fm + Fe);
      }
      const double t_b = t - sx;
      return finish(t_b <= opt.tol_gamma / c1_floor ? Region::Gamma : Region::QMinus,
                    std::max(t_b, 0.0), xb, acc);
    }

    if (has_h) {
      Vec3 Fm = h(t - (s + 0.5 * hs), hermite(0.5));
      Vec3 Fe = h(t - (s + hs), Xn);
      acc += (hs / 6.0) * (Fprev + 4.0 * Fm + Fe);
      Fprev = Fe;
    }
    s += hs;
    X = Xn;
    k1 = kend;
    if (s >= t - 1e-14) {
      return finish(X[0] <= -1.0 + opt.tol_gamma ? Region::Gamma : Region::QPlus, 0.0, X, acc);
    }
  }
}

/// std::function-backed pipe transport problem (3-component data).
struct PipeTransport {
  std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)> velocity;
  double c1 = 1.0;  // lower bound of u1
  double c2 = 1.0;  // upper bound of u1
  std::function<Eigen::Vector3d(const Eigen::Vector3d&)> f0;
  std::function<Eigen::Vector3d(double, double, double)> b;  // (t, x2, x3)
  std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)> h;
};

struct Transport3Options {
  Trace3Options trace;
  double quad_tol = 1e-9;
};

struct Transport3Diag {
  double max_gamma_mismatch = 0.0;
  int gamma_points = 0;
};

VecField3 transport3d_solve(const PipeTransport& p, double t, const Grid3& g,
                            const Transport3Options& opt = {},
                            Transport3Diag* diag = nullptr);

struct LateralInvarianceReport {
  double max_drift = 0.0;
  int points = 0;
};

/// Forward-traces points seeded on the lateral faces with the UNregularized
/// field and reports the maximal distance from the lateral boundary.
LateralInvarianceReport lateral_invariance_check(
    const std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)>& u, double horizon,
    int per_face, double ode_tol = 1e-10);

struct DecayReport {
  double lhs_p = 0.0;   // sup_t ||w f(t)||_p^p
  double rhs_p = 0.0;   // explicit right-hand side
  double headroom = 4.0;
  bool pass = false;
  std::vector<double> times;
  std::vector<double> lhs_series;
};

DecayReport weighted_lp_decay_check(const PipeTransport& p, const Grid3& g, double horizon,
                                    int samples, double pexp, double alpha,
                                    double headroom = 4.0, const Transport3Options& opt = {});

}  // namespace inflow
