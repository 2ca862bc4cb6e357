#include "inflow/transport3d.hpp"

#include <cmath>

namespace inflow {

VecField3 transport3d_solve(const PipeTransport& p, double t, const Grid3& g,
                            const Transport3Options& opt, Transport3Diag* diag) {
  // audit the declared lower bound of the axial speed
  for (double ts : {0.0, 0.5 * t, t}) {
    for (int i = 0; i < g.n; i += 3)
      for (int j = 0; j < g.n; j += 3)
        for (int k = 0; k < g.n; k += 3) {
          Eigen::Vector3d x(g.node(i), g.node(j), g.node(k));
          if (p.velocity(ts, x)[0] < p.c1 * (1.0 - 1e-9))
            throw PreconditionError("transport3d_solve: u1 drops below the declared c1");
        }
  }

  VecField3 out{Field3(g.size()), Field3(g.size()), Field3(g.size())};
  Transport3Diag d;
  const bool has_h = static_cast<bool>(p.h);
  auto u = [&](double tt, const Eigen::Vector3d& x) { return p.velocity(tt, x); };
  auto h = [&](double tt, const Eigen::Vector3d& x) {
    return p.h ? p.h(tt, x) : Eigen::Vector3d::Zero().eval();
  };
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Eigen::Vector3d x(g.node(i), g.node(j), g.node(k));
        double mism = -1.0;
        Eigen::Vector3d v =
            mild_value3(u, p.f0, p.b, h, has_h, t, x, opt.trace, opt.quad_tol, p.c1, &mism);
        int id = g.idx(i, j, k);
        out[0][id] = v[0];
        out[1][id] = v[1];
        out[2][id] = v[2];
        if (mism >= 0.0) {
          ++d.gamma_points;
          d.max_gamma_mismatch = std::max(d.max_gamma_mismatch, mism);
        }
      }
  if (diag) *diag = d;
  return out;
}

LateralInvarianceReport lateral_invariance_check(
    const std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)>& u, double horizon,
    int per_face, double ode_tol) {
  using Vec3 = Eigen::Matrix<double, 3, 1>;
  LateralInvarianceReport rep;
  auto rhs = [&](double tt, const Vec3& y) -> Vec3 { return u(tt, y); };
  auto ev = [](int k, double, const Vec3& y) { return k == 0 ? 1.0 - y[0] : y[0] + 1.0; };

  auto drift_of = [](const Vec3& y) {
    return std::min(std::abs(1.0 - std::abs(y[1])), std::abs(1.0 - std::abs(y[2])));
  };

  int m = std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(per_face)))));
  for (int face = 0; face < 4; ++face)
    for (int a = 0; a < m; ++a)
      for (int c = 0; c < m; ++c) {
        double s1 = -0.95 + 1.9 * a / (m - 1);   // axial seed
        double s2 = -0.95 + 1.9 * c / (m - 1);   // in-face lateral seed
        Vec3 y0;
        switch (face) {
          case 0: y0 = Vec3(s1, -1.0, s2); break;
          case 1: y0 = Vec3(s1, 1.0, s2); break;
          case 2: y0 = Vec3(s1, s2, -1.0); break;
          default: y0 = Vec3(s1, s2, 1.0); break;
        }
        ode::Options opt;
        opt.tol = ode_tol;
        ode::Path<3> path = ode::integrate<3>(rhs, 0.0, horizon, y0, opt, ev, 2);
        ++rep.points;
        for (const auto& st : path.steps)
          for (double th : {0.25, 0.5, 0.75, 1.0})
            rep.max_drift = std::max(rep.max_drift, drift_of(st.dense(th)));
        rep.max_drift = std::max(rep.max_drift, drift_of(path.y_end));
      }
  return rep;
}

DecayReport weighted_lp_decay_check(const PipeTransport& p, const Grid3& g, double horizon,
                                    int samples, double pexp, double alpha, double headroom,
                                    const Transport3Options& opt) {
  DecayReport rep;
  rep.headroom = headroom;

  VecField3 f0 = sample_vector(
      g, [&](double x1, double x2, double x3) { return p.f0(Eigen::Vector3d(x1, x2, x3)); });
  const double wf0 = std::pow(lp_norm(g, f0, pexp, alpha), pexp);

  double wb = 0.0, wh = 0.0;
  const double w_in = std::exp(alpha);  // weight at x1 = -1
  for (int s = 0; s <= 4 * samples; ++s) {
    double t = horizon * s / (4.0 * samples);
    Face2 bf(g.n, g.n);
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Eigen::Vector3d bv = p.b(t, g.node(j), g.node(k));
        bf(j, k) = bv.norm();
      }
    acc = std::pow(face_lp_norm(g, bf, pexp, w_in), pexp);
    wb = std::max(wb, acc);
    if (p.h) {
      VecField3 hf = sample_vector(g, [&](double x1, double x2, double x3) {
        return p.h(t, Eigen::Vector3d(x1, x2, x3));
      });
      wh = std::max(wh, std::pow(lp_norm(g, hf, pexp, alpha), pexp));
    }
  }
  const double c1a = p.c1 * alpha;
  rep.rhs_p = wf0 + (p.c2 / c1a) * wb + std::pow(c1a, -pexp) * wh;

  for (int s = 0; s <= samples; ++s) {
    double t = horizon * s / samples;
    VecField3 f = s == 0 ? f0 : transport3d_solve(p, t, g, opt);
    double v = std::pow(lp_norm(g, f, pexp, alpha), pexp);
    rep.times.push_back(t);
    rep.lhs_series.push_back(v);
    rep.lhs_p = std::max(rep.lhs_p, v);
  }
  rep.pass = rep.lhs_p <= headroom * rep.rhs_p * (1.0 + 1e-9);
  return rep;
}

}  // namespace inflow
