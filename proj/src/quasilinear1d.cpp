#include "inflow/quasilinear1d.hpp"

#include <algorithm>
#include <cmath>

#include "inflow/errors.hpp"

namespace inflow {

namespace {

struct Coeffs {
  int n = 0;
  std::vector<Slab1D> lam;                            // [i]
  std::vector<Slab1D> T, Tinv, dtTinv, dxTinv, dtT;   // [a*n + b]
  double min_abs_lambda = 0.0;
};

Coeffs build_coeffs(const FluxSystem& sys, const VectorSlab1D& vstar, double lambda_floor) {
  const int n = sys.n;
  const int mr = vstar[0].rows(), nc = vstar[0].cols();
  const double dt = vstar[0].dt;
  Coeffs c;
  c.n = n;
  c.lam.assign(static_cast<std::size_t>(n), Slab1D(mr, nc, dt));
  c.T.assign(static_cast<std::size_t>(n * n), Slab1D(mr, nc, dt));
  c.Tinv.assign(static_cast<std::size_t>(n * n), Slab1D(mr, nc, dt));
  c.min_abs_lambda = std::numeric_limits<double>::max();

  Eigen::VectorXd state(n);
  for (int m = 0; m < mr; ++m)
    for (int j = 0; j < nc; ++j) {
      for (int a = 0; a < n; ++a) state[a] = sys.base_state[a] + vstar[static_cast<std::size_t>(a)].a(m, j);
      EigenDecomposition d = eigendecompose(sys, state, lambda_floor);
      for (int i = 0; i < n; ++i) {
        c.lam[static_cast<std::size_t>(i)].a(m, j) = d.lambdas[i];
        c.min_abs_lambda = std::min(c.min_abs_lambda, std::abs(d.lambdas[i]));
      }
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          c.T[static_cast<std::size_t>(a * n + b)].a(m, j) = d.T(a, b);
          c.Tinv[static_cast<std::size_t>(a * n + b)].a(m, j) = d.T_inv(a, b);
        }
    }

  c.dtTinv.reserve(static_cast<std::size_t>(n * n));
  c.dxTinv.reserve(static_cast<std::size_t>(n * n));
  c.dtT.reserve(static_cast<std::size_t>(n * n));
  for (int ab = 0; ab < n * n; ++ab) {
    c.dtTinv.push_back(c.Tinv[static_cast<std::size_t>(ab)].time_derivative());
    c.dxTinv.push_back(c.Tinv[static_cast<std::size_t>(ab)].space_derivative());
    c.dtT.push_back(c.T[static_cast<std::size_t>(ab)].time_derivative());
  }
  return c;
}

SpeedField1D family_speed(const Coeffs& c, int i, double lam_bar) {
  SpeedField1D s;
  const Slab1D* sl = &c.lam[static_cast<std::size_t>(i)];
  s.eval = [sl](double t, double x) { return sl->eval(t, x); };
  s.lambda_m = sl->a.cwiseAbs().minCoeff();
  s.lip_bound = std::max(sl->time_derivative().sup_norm(), sl->space_derivative().sup_norm());
  s.sign = lam_bar > 0 ? +1 : -1;
  return s;
}

double slab_sup_diff(const VectorSlab1D& a, const VectorSlab1D& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, (a[i].a - b[i].a).cwiseAbs().maxCoeff());
  return d;
}

struct SlabNorms {
  std::vector<double> norm_series;  // ||V||_W1inf + ||dtV||_inf per sample
  std::vector<double> grad_series;  // ||dxV||_inf per sample
  double trace_w1 = 0.0;
  double total = 0.0;  // sup_t norm_series + trace_w1
};

SlabNorms system_norms(const VectorSlab1D& V) {
  const int n = static_cast<int>(V.size());
  const int mr = V[0].rows(), nc = V[0].cols();
  std::vector<Slab1D> dt(static_cast<std::size_t>(n)), dx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    dt[static_cast<std::size_t>(i)] = V[static_cast<std::size_t>(i)].time_derivative();
    dx[static_cast<std::size_t>(i)] = V[static_cast<std::size_t>(i)].space_derivative();
  }
  SlabNorms out;
  out.norm_series.resize(static_cast<std::size_t>(mr));
  out.grad_series.resize(static_cast<std::size_t>(mr));
  double sup_series = 0.0;
  for (int m = 0; m < mr; ++m) {
    double sv = 0.0, sdx = 0.0, sdt = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < nc; ++j) {
        sv = std::max(sv, std::abs(V[static_cast<std::size_t>(i)].a(m, j)));
        sdx = std::max(sdx, std::abs(dx[static_cast<std::size_t>(i)].a(m, j)));
        sdt = std::max(sdt, std::abs(dt[static_cast<std::size_t>(i)].a(m, j)));
      }
    out.norm_series[static_cast<std::size_t>(m)] = std::max(sv, sdx) + sdt;
    out.grad_series[static_cast<std::size_t>(m)] = sdx;
    sup_series = std::max(sup_series, out.norm_series[static_cast<std::size_t>(m)]);
  }
  double trace = 0.0;
  for (int j : {0, nc - 1})
    for (int i = 0; i < n; ++i) {
      const auto& col = V[static_cast<std::size_t>(i)].a.col(j);
      const auto& dcol = dt[static_cast<std::size_t>(i)].a.col(j);
      trace = std::max({trace, col.cwiseAbs().maxCoeff(), dcol.cwiseAbs().maxCoeff()});
    }
  out.trace_w1 = trace;
  out.total = sup_series + trace;
  return out;
}

}  // namespace

OuterResult outer_solve(const SystemProblem& problem, const OuterConfig& config) {
  const FluxSystem& sys = problem.system;
  const int n = sys.n;
  const int nc = config.grid_n;
  const int mr = static_cast<int>(std::lround(config.horizon / config.dt)) + 1;
  const double dxg = 2.0 / (nc - 1);

  EigenDecomposition base = eigendecompose(sys, sys.base_state);
  const double min_lam_bar = base.lambdas.cwiseAbs().minCoeff();
  const double lambda_floor = 0.5 * min_lam_bar;

  // f0 = T0^{-1} V0 with T0 evaluated at the perturbed state
  std::vector<std::function<double(double)>> f0(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    f0[static_cast<std::size_t>(i)] = [&sys, V0 = problem.V0, i](double x) {
      Eigen::VectorXd v = V0(x);
      EigenDecomposition d = eigendecompose(sys, (sys.base_state + v).eval());
      return (d.T_inv * v).eval()(i);
    };

  // corner compatibility, per family on its own inflow side
  for (int i = 0; i < n; ++i) {
    const double x_in = base.lambdas[i] > 0 ? -1.0 : 1.0;
    double gap = std::abs(f0[static_cast<std::size_t>(i)](x_in) -
                          problem.b[static_cast<std::size_t>(i)](0.0));
    if (gap > 1e-10)
      throw PreconditionError("outer_solve: corner compatibility violated for family " +
                              std::to_string(i) + " (gap " + std::to_string(gap) + ")");
  }

  // data norm and smallness budget
  double v0_sup = 0.0, v0_lip = 0.0;
  for (int j = 0; j < 4 * nc; ++j) {
    double x = -1.0 + 2.0 * j / (4.0 * nc - 1);
    v0_sup = std::max(v0_sup, problem.V0(x).cwiseAbs().maxCoeff());
    if (problem.V0_prime)
      v0_lip = std::max(v0_lip, problem.V0_prime(x).cwiseAbs().maxCoeff());
  }
  if (!problem.V0_prime) {
    const double hs = 1e-6;
    for (int j = 0; j < 4 * nc; ++j) {
      double x = std::clamp(-1.0 + 2.0 * j / (4.0 * nc - 1), -1.0 + hs, 1.0 - hs);
      v0_lip = std::max(
          v0_lip,
          ((problem.V0(x + hs) - problem.V0(x - hs)) / (2.0 * hs)).cwiseAbs().maxCoeff());
    }
  }
  double b_norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < 8 * mr; ++m) {
      double t = config.horizon * m / (8.0 * mr - 1);
      b_norm = std::max(b_norm, std::abs(problem.b[static_cast<std::size_t>(i)](t)));
      if (!problem.b_prime.empty() && problem.b_prime[static_cast<std::size_t>(i)]) {
        b_norm = std::max(b_norm, std::abs(problem.b_prime[static_cast<std::size_t>(i)](t)));
      }
    }
  const double data_norm = std::max(v0_sup, v0_lip) + b_norm;
  if (data_norm > problem.eps0_budget)
    throw PreconditionError("outer_solve: data norm " + std::to_string(data_norm) +
                            " exceeds the smallness budget " +
                            std::to_string(problem.eps0_budget));

  const bool const_frame = has_constant_frame(sys);

  OuterResult res;
  res.data_norm = data_norm;
  res.V.assign(static_cast<std::size_t>(n), Slab1D(mr, nc, config.dt));
  res.f.assign(static_cast<std::size_t>(n), Slab1D(mr, nc, config.dt));

  VectorSlab1D V_prev = res.V;  // V^1 = 0
  VectorSlab1D f_prev = res.f;  // f^1 = 0

  double d_prev = 0.0;
  int stalled = 0;

  for (int level = 1; level <= config.l_max; ++level) {
    LevelDiagnostics diag;
    diag.level = level;

    VectorSlab1D vstar(static_cast<std::size_t>(n));
    double vdist = 0.0;
    double vc2 = 0.0;
    for (int i = 0; i < n; ++i) {
      vstar[static_cast<std::size_t>(i)] =
          mollify(V_prev[static_cast<std::size_t>(i)], 1.0 / level);
      vdist = std::max(vdist, (vstar[static_cast<std::size_t>(i)].a -
                               V_prev[static_cast<std::size_t>(i)].a)
                                  .cwiseAbs()
                                  .maxCoeff());
      vc2 = std::max(vc2, vstar[static_cast<std::size_t>(i)].c2_seminorm());
    }
    diag.vstar_dist = vdist;
    diag.vstar_c2 = vc2;

    Coeffs coeffs = build_coeffs(sys, vstar, lambda_floor);
    diag.min_abs_lambda = coeffs.min_abs_lambda;

    std::vector<SpeedField1D> speeds;
    speeds.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) speeds.push_back(family_speed(coeffs, i, base.lambdas[i]));

    // inner iteration: frozen speeds, lagged cross-family coupling
    VectorSlab1D f_cur = f_prev;
    VectorSlab1D f_next(static_cast<std::size_t>(n), Slab1D(mr, nc, config.dt));
    VectorSlab1D forcing(static_cast<std::size_t>(n), Slab1D(mr, nc, config.dt));

    double diff_prev = -1.0;
    int bad_ratio_streak = 0;
    for (int j = 1; j <= config.j_max; ++j) {
      const VectorSlab1D* hs = nullptr;
      if (!const_frame) {
        // H_i = row_i[(dt + lambda_i dx) T*^-1] (T* f_cur)
        for (int m = 0; m < mr; ++m)
          for (int jx = 0; jx < nc; ++jx) {
            for (int i = 0; i < n; ++i) {
              double vi = 0.0;
              for (int b = 0; b < n; ++b) {
                double vc = 0.0;  // (T* f)_b
                for (int k = 0; k < n; ++k)
                  vc += coeffs.T[static_cast<std::size_t>(b * n + k)].a(m, jx) *
                        f_cur[static_cast<std::size_t>(k)].a(m, jx);
                vi += (coeffs.dtTinv[static_cast<std::size_t>(i * n + b)].a(m, jx) +
                       coeffs.lam[static_cast<std::size_t>(i)].a(m, jx) *
                           coeffs.dxTinv[static_cast<std::size_t>(i * n + b)].a(m, jx)) *
                      vc;
              }
              forcing[static_cast<std::size_t>(i)].a(m, jx) = vi;
            }
          }
        hs = &forcing;
      }

      for (int i = 0; i < n; ++i) {
        TransportProblem1D tp;
        tp.speed = speeds[static_cast<std::size_t>(i)];
        tp.f0 = f0[static_cast<std::size_t>(i)];
        tp.b = problem.b[static_cast<std::size_t>(i)];
        if (hs) {
          const Slab1D* H = &(*hs)[static_cast<std::size_t>(i)];
          tp.h = [H](double t, double x) { return H->eval(t, x); };
        }
        Slab1D& out = f_next[static_cast<std::size_t>(i)];
        for (int m = 0; m < mr; ++m) {
          const double t = m * config.dt;
          for (int jx = 0; jx < nc; ++jx)
            out.a(m, jx) = solve_mild_point(tp, t, -1.0 + jx * dxg, config.mild).value;
        }
      }

      double diff = slab_sup_diff(f_next, f_cur);
      f_cur = f_next;
      ++diag.inner_iters;
      if (diff_prev > 0.0) {
        double ratio = diff / diff_prev;
        diag.inner_ratios.push_back(ratio);
        if (ratio >= 1.0 && diff > config.tol_inner) {
          if (++bad_ratio_streak >= 3)
            throw SolverDivergenceError("inner iteration stopped contracting at level " +
                                        std::to_string(level));
        } else {
          bad_ratio_streak = 0;
        }
      }
      diff_prev = diff;
      if (const_frame || diff <= config.tol_inner) break;
    }

    // V^{l+1} = T* f^{l+1}
    VectorSlab1D V_next(static_cast<std::size_t>(n), Slab1D(mr, nc, config.dt));
    for (int m = 0; m < mr; ++m)
      for (int jx = 0; jx < nc; ++jx)
        for (int a = 0; a < n; ++a) {
          double v = 0.0;
          for (int b = 0; b < n; ++b)
            v += coeffs.T[static_cast<std::size_t>(a * n + b)].a(m, jx) *
                 f_cur[static_cast<std::size_t>(b)].a(m, jx);
          V_next[static_cast<std::size_t>(a)].a(m, jx) = v;
        }

    // good unknown  g = dt f + T*^-1 (dt T*) f  and the derivative recovery
    {
      std::vector<Slab1D> dtf(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        dtf[static_cast<std::size_t>(i)] = f_cur[static_cast<std::size_t>(i)].time_derivative();
      double g_sup = 0.0;
      Slab1D dtV_fd = V_next[0].time_derivative();
      double dtv_sup = dtV_fd.sup_norm();
      for (int a = 1; a < n; ++a)
        dtv_sup = std::max(dtv_sup,
                           V_next[static_cast<std::size_t>(a)].time_derivative().sup_norm());
      Eigen::MatrixXd Tm(n, n), Tim(n, n), dTm(n, n);
      Eigen::VectorXd fv(n), gv(n);
      for (int m = 0; m < mr; ++m)
        for (int jx = 0; jx < nc; ++jx) {
          for (int a = 0; a < n; ++a) {
            fv[a] = f_cur[static_cast<std::size_t>(a)].a(m, jx);
            for (int b = 0; b < n; ++b) {
              Tim(a, b) = coeffs.Tinv[static_cast<std::size_t>(a * n + b)].a(m, jx);
              dTm(a, b) = coeffs.dtT[static_cast<std::size_t>(a * n + b)].a(m, jx);
            }
          }
          gv = Tim * (dTm * fv);
          for (int a = 0; a < n; ++a)
            gv[a] += dtf[static_cast<std::size_t>(a)].a(m, jx);
          g_sup = std::max(g_sup, gv.cwiseAbs().maxCoeff());
        }
      diag.g_over_dtv = dtv_sup > 0.0 ? g_sup / dtv_sup : 1.0;
    }

    // between-level norm budget
    SlabNorms norms = system_norms(V_next);
    diag.induction_norm = norms.total;
    if (norms.total > config.delta)
      throw StabilityBudgetError("outer_solve: level " + std::to_string(level) +
                                 " norm " + std::to_string(norms.total) +
                                 " exceeds budget " + std::to_string(config.delta));

    // level difference in the frozen frame
    double d_norm = 0.0;
    Eigen::VectorXd dv(n);
    for (int m = 0; m < mr; ++m)
      for (int jx = 0; jx < nc; ++jx) {
        for (int i = 0; i < n; ++i) {
          double acc = 0.0;
          for (int b = 0; b < n; ++b)
            acc += coeffs.Tinv[static_cast<std::size_t>(i * n + b)].a(m, jx) *
                   (V_next[static_cast<std::size_t>(b)].a(m, jx) -
                    V_prev[static_cast<std::size_t>(b)].a(m, jx));
          dv[i] = acc;
        }
        d_norm = std::max(d_norm, dv.cwiseAbs().maxCoeff());
      }
    diag.d_norm = d_norm;
    diag.outer_ratio = d_prev > 0.0 ? d_norm / d_prev : 0.0;

    res.levels.push_back(diag);
    V_prev = V_next;
    f_prev = f_cur;

    if (d_prev > 0.0 && diag.outer_ratio >= 1.0 && d_norm > config.tol_outer) {
      if (++stalled >= 3)
        throw SolverDivergenceError("outer iteration stopped contracting at level " +
                                    std::to_string(level));
    } else {
      stalled = 0;
    }
    d_prev = d_norm;

    if (d_norm <= config.tol_outer) {
      res.converged = true;
      break;
    }
  }

  res.V = V_prev;
  res.f = f_prev;
  SlabNorms norms = system_norms(res.V);
  res.response_norm = norms.total;
  res.stability_constant = data_norm > 0.0 ? norms.total / data_norm : 0.0;
  res.norm_series = norms.norm_series;
  res.max_grad_series = norms.grad_series;
  res.times.resize(static_cast<std::size_t>(mr));
  for (int m = 0; m < mr; ++m) res.times[static_cast<std::size_t>(m)] = m * config.dt;
  return res;
}

double periodic_crossing_time(double base, double amp, int mode, int samples, double rel_tol) {
  if (amp == 0.0) return std::numeric_limits<double>::infinity();
  const double pi = 3.14159265358979323846;
  std::vector<double> x(static_cast<std::size_t>(samples)), u(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    x[static_cast<std::size_t>(k)] = -1.0 + 2.0 * k / samples;
    u[static_cast<std::size_t>(k)] = base + amp * std::sin(mode * pi * x[static_cast<std::size_t>(k)]);
  }
  auto crossed = [&](double t) {
    for (int k = 0; k < samples; ++k) {
      int k2 = (k + 1) % samples;
      double gap = (k2 == 0 ? 2.0 : 0.0) + x[static_cast<std::size_t>(k2)] -
                   x[static_cast<std::size_t>(k)] +
                   (u[static_cast<std::size_t>(k2)] - u[static_cast<std::size_t>(k)]) * t;
      if (gap <= 0.0) return true;
    }
    return false;
  };
  double hi = 1.0 / (amp * mode * pi);
  int guard = 0;
  while (!crossed(hi) && guard++ < 60) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > rel_tol * hi) {
    double mid = 0.5 * (lo + hi);
    if (crossed(mid)) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

ShockContrastReport shock_contrast(double amp, int mode, double horizon_factor,
                                   OuterConfig config) {
  if (amp > 0.1) throw PreconditionError("shock_contrast: amplitude above 0.1");
  const double pi = 3.14159265358979323846;
  ShockContrastReport rep;
  rep.t_star = periodic_crossing_time(1.0, amp, mode);

  if (amp == 0.0) return rep;

  SystemProblem pb;
  pb.system = make_flux_system("burgers");
  pb.V0 = [amp, mode, pi](double x) {
    Eigen::VectorXd v(1);
    v[0] = amp * std::sin(mode * pi * x);
    return v;
  };
  pb.V0_prime = [amp, mode, pi](double x) {
    Eigen::VectorXd v(1);
    v[0] = amp * mode * pi * std::cos(mode * pi * x);
    return v;
  };
  pb.b = {[](double) { return 0.0; }};
  pb.b_prime = {[](double) { return 0.0; }};
  pb.eps0_budget = 1.0;

  config.horizon = horizon_factor * rep.t_star;
  config.delta = 2.0;  // boundedness is measured here, not budgeted
  OuterResult run = outer_solve(pb, config);

  rep.times = run.times;
  rep.inflow_max_grad = run.max_grad_series;
  double g0 = run.max_grad_series.front();
  for (double g : run.max_grad_series)
    rep.grad_ratio_max = std::max(rep.grad_ratio_max, g / g0);
  return rep;
}

}  // namespace inflow
