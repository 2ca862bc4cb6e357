#include <doctest.h>
#include <random>

#include <cmath>

#include "inflow/transport3d.hpp"

using namespace inflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Vector3d vec3(double a, double b, double c) { return {a, b, c}; }

PipeTransport plug_problem() {
  PipeTransport p;
  p.velocity = [](double, const Eigen::Vector3d&) { return vec3(1, 0, 0); };
  p.c1 = p.c2 = 1.0;
  p.f0 = [](const Eigen::Vector3d&) { return Eigen::Vector3d::Zero().eval(); };
  p.b = [](double, double, double) { return Eigen::Vector3d::Zero().eval(); };
  return p;
}

// stream-function swirl that is tangential on every lateral face
double swirl_phi(double x2, double x3) {
  double a = 1.0 - x2 * x2, b = 1.0 - x3 * x3;
  return a * a * b * b;
}

Eigen::Vector3d swirl_velocity(double u1, const Eigen::Vector3d& x) {
  double x2 = x[1], x3 = x[2];
  double a = 1.0 - x2 * x2, b = 1.0 - x3 * x3;
  double d3 = a * a * 2.0 * b * (-2.0 * x3);
  double d2 = 2.0 * a * (-2.0 * x2) * b * b;
  return {u1, d3, -d2};
}

}  // namespace

TEST_CASE("plug transport translates the datum") {
  auto p = plug_problem();
  p.f0 = [](const Eigen::Vector3d& x) {
    double v = std::cos(0.5 * kPi * x[0]) * std::cos(kPi * x[1]) * std::cos(kPi * x[2]);
    return vec3(v, 0.5 * v, -v);
  };
  Grid3 g{17};
  const double t = 0.8;
  auto worst_for = [&](double eps) {
    Transport3Options opt;
    opt.trace.eps = eps;
    VecField3 f = transport3d_solve(p, t, g, opt);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          double x1 = g.node(i);
          Eigen::Vector3d exact = x1 - t >= -1.0
                                      ? p.f0(vec3(x1 - t, g.node(j), g.node(k)))
                                      : Eigen::Vector3d::Zero().eval();
          int id = g.idx(i, j, k);
          worst = std::max({worst, std::abs(f[0][id] - exact[0]),
                            std::abs(f[1][id] - exact[1]), std::abs(f[2][id] - exact[2])});
        }
    return worst;
  };
  // dominant error is the lateral regularization drift eps*t*|grad f0|
  double e_full = worst_for(1e-6);
  CHECK(e_full <= 5e-6);
  double e_half = worst_for(5e-7);
  CHECK(e_half <= 0.75 * e_full + 1e-9);
}

TEST_CASE("zero data stays zero; inflow datum fills a front") {
  auto p = plug_problem();
  Grid3 g{9};
  VecField3 f = transport3d_solve(p, 2.0, g);
  CHECK(lp_norm(g, f, 4.0) <= 1e-12);

  p.b = [](double, double, double) { return vec3(1, 0, 0); };
  const double t = 0.9;
  VecField3 filled = transport3d_solve(p, t, g);
  for (int i = 0; i < g.n; ++i) {
    double x1 = g.node(i);
    if (std::abs(x1 - (-1.0 + t)) < 1e-6) continue;  // front location
    double expect = x1 < -1.0 + t ? 1.0 : 0.0;
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        CHECK(filled[0][g.idx(i, j, k)] == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("u1 below the declared floor is rejected") {
  auto p = plug_problem();
  p.velocity = [](double, const Eigen::Vector3d& x) { return vec3(0.5 + 0.4 * x[0], 0, 0); };
  Grid3 g{9};
  CHECK_THROWS_AS((void)transport3d_solve(p, 1.0, g), PreconditionError);
}

TEST_CASE("lateral faces are invariant for tangential fields") {
  auto u = [](double, const Eigen::Vector3d& x) { return swirl_velocity(0.15, x); };
  LateralInvarianceReport rep = lateral_invariance_check(u, 10.0, 50, 1e-11);
  CHECK(rep.points == 4 * 49);
  CHECK(rep.max_drift <= 1e-8);

  // an injected normal-velocity violation is detected with first-order drift
  auto bad = [](double, const Eigen::Vector3d& x) {
    Eigen::Vector3d v = swirl_velocity(0.5, x);
    v[1] += 1e-3;
    return v;
  };
  LateralInvarianceReport rep2 = lateral_invariance_check(bad, 2.0, 16, 1e-11);
  CHECK(rep2.max_drift >= 0.5e-3);
  CHECK(rep2.max_drift <= 5e-3);
}

TEST_CASE("weighted decay bound with explicit constants") {
  SUBCASE("zero data") {
    auto p = plug_problem();
    Grid3 g{9};
    DecayReport r = weighted_lp_decay_check(p, g, 3.0, 6, 4.0, 1.0);
    CHECK(r.lhs_p == doctest::Approx(0.0));
    CHECK(r.pass);
  }
  SUBCASE("bump flushes and the bound holds with margin") {
    auto p = plug_problem();
    p.f0 = [](const Eigen::Vector3d& x) {
      double b = std::cos(0.5 * kPi * x[0]);
      return vec3(b * b, 0, 0);
    };
    Grid3 g{17};
    DecayReport r = weighted_lp_decay_check(p, g, 3.0, 6, 4.0, 1.0);
    CHECK(r.pass);
    CHECK(r.lhs_series.back() <= 1e-10);  // flushed by t = 2/c1
  }
  SUBCASE("steady forcing saturates below the forcing bound") {
    auto p = plug_problem();
    p.h = [](double, const Eigen::Vector3d&) { return vec3(1, 0, 0); };
    Grid3 g{17};
    DecayReport r = weighted_lp_decay_check(p, g, 4.0, 8, 4.0, 1.0);
    CHECK(r.pass);
  }
}

TEST_CASE("fixed-step evaluation agrees with the adaptive reference") {
  // near-axial regime: O(1) axial speed plus a small transverse perturbation,
  // which is the regime the fixed-step path is used in
  auto u = [](double, const Eigen::Vector3d& x) {
    Eigen::Vector3d v = swirl_velocity(1.2, x);
    v[1] *= 0.05;
    v[2] *= 0.05;
    return v;
  };
  auto f0 = [](const Eigen::Vector3d& x) {
    return vec3(std::cos(0.5 * kPi * x[0]) * std::cos(kPi * x[1]),
                0.3 * std::sin(kPi * x[2]), 0.1 * x[0]);
  };
  auto b = [](double t, double x2, double x3) {
    return vec3(0.05 * t * std::cos(kPi * x2), 0.0, 0.02 * x3);
  };
  auto h = [](double t, const Eigen::Vector3d& x) {
    return vec3(0.1 * std::sin(t + x[0]), 0.05 * x[1] * x[2], -0.04 * std::cos(x[0]));
  };
  Trace3Options topt;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ux(-0.98, 0.98), ut(0.05, 3.0);
  double worst = 0.0, worst_fine = 0.0;
  for (int k = 0; k < 60; ++k) {
    Eigen::Vector3d x(ux(rng), ux(rng), ux(rng));
    double t = ut(rng);
    Eigen::Vector3d ref = mild_value3(u, f0, b, h, true, t, x, topt, 1e-11, 1.2);
    Eigen::Vector3d fast = mild_value3_fixed(u, f0, b, h, true, t, x, 0.15, topt, 1.2);
    Eigen::Vector3d fine = mild_value3_fixed(u, f0, b, h, true, t, x, 0.05, topt, 1.2);
    worst = std::max(worst, (ref - fast).cwiseAbs().maxCoeff());
    worst_fine = std::max(worst_fine, (ref - fine).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 2e-5);
  CHECK(worst_fine <= 0.3 * worst + 1e-12);  // step refinement converges
}

TEST_CASE("swirl transport against a half-resolution trace oracle") {
  PipeTransport p;
  p.velocity = [](double, const Eigen::Vector3d& x) { return swirl_velocity(1.0, x); };
  p.c1 = p.c2 = 1.0;
  p.f0 = [](const Eigen::Vector3d& x) {
    return vec3(std::sin(kPi * x[1]) * std::cos(0.5 * kPi * x[0]), 0, 0);
  };
  p.b = [](double, double, double) { return Eigen::Vector3d::Zero().eval(); };

  Grid3 g{9};
  Transport3Options tight;
  tight.trace.ode_tol = 1e-12;
  VecField3 a = transport3d_solve(p, 0.7, g);
  VecField3 b = transport3d_solve(p, 0.7, g, tight);
  VecField3 diff{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  CHECK(lp_norm(g, diff, 4.0) <= 1e-6);
}
