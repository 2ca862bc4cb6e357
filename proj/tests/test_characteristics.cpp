#include <doctest.h>

#include <cmath>
#include <random>

#include "inflow/characteristics1d.hpp"

using namespace inflow;

namespace {

SpeedField1D affine_speed(double a, double b) {
  // lambda(t,x) = a + b x, assumed positive on [-1,1]
  SpeedField1D s;
  s.eval = [a, b](double, double x) { return a + b * x; };
  s.lambda_m = std::min(a - std::abs(b), a + std::abs(b));
  s.lip_bound = std::abs(b);
  s.sign = +1;
  return s;
}

// forward re-integration used as the consistency oracle
double forward_to(const SpeedField1D& speed, double t0, double x0, double t1) {
  auto rhs = [&](double tau, const Eigen::Matrix<double, 1, 1>& y) {
    Eigen::Matrix<double, 1, 1> d;
    d[0] = speed.eval(tau, y[0]);
    return d;
  };
  Eigen::Matrix<double, 1, 1> y0;
  y0[0] = x0;
  ode::Options opt;
  opt.tol = 1e-12;
  opt.keep_path = false;
  return ode::integrate<1>(rhs, t0, t1, y0, opt).y_end[0];
}

}  // namespace

TEST_CASE("trace: straight lines for constant speeds") {
  auto s = constant_speed(1.0);
  TraceResult r = trace(s, 1.0, 0.5, 0.0);
  CHECK(r.position == doctest::Approx(-0.5).epsilon(1e-12));

  auto neg = constant_speed(-1.0);
  TraceResult r2 = trace(neg, 1.0, 0.0, 0.0);
  CHECK(r2.position == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trace: affine speed against the closed form") {
  // X(tau) = (x+2) e^{(tau-t)/2} - 2 for lambda = 1 + x/2
  auto s = affine_speed(1.0, 0.5);
  TraceResult r = trace(s, 1.0, 0.0, 0.0);
  const double expected = 2.0 * std::exp(-0.5) - 2.0;
  CHECK(expected == doctest::Approx(-0.7869386805747332).epsilon(1e-14));
  CHECK(r.position == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("backward_exit: the three regions for unit speed") {
  auto s = constant_speed(1.0);

  ExitRecord a = backward_exit(s, 0.5, 0.0);
  CHECK(a.region == Region::QPlus);
  CHECK(a.t_b == doctest::Approx(0.0));
  CHECK(a.x_b == doctest::Approx(-0.5).epsilon(1e-10));

  ExitRecord b = backward_exit(s, 3.0, 0.0);
  CHECK(b.region == Region::QMinus);
  CHECK(b.t_b == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(b.x_b == doctest::Approx(-1.0));

  ExitRecord c = backward_exit(s, 1.0, 0.0);
  CHECK(c.region == Region::Gamma);
  CHECK(c.t_b == doctest::Approx(0.0));
  CHECK(c.x_b == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("gamma_curve samples") {
  auto s1 = constant_speed(1.0);
  auto pts = gamma_curve(s1, 5.0, 11);
  CHECK(pts.back().first == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(pts.back().second == doctest::Approx(1.0));
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(pts[i].second == doctest::Approx(-1.0 + pts[i].first).epsilon(1e-9));

  auto s2 = constant_speed(2.0);
  auto pts2 = gamma_curve(s2, 5.0, 5);
  CHECK(pts2.back().first == doctest::Approx(1.0).epsilon(1e-10));

  // exit time solves e^{tau/2} = 3
  auto s3 = affine_speed(1.0, 0.5);
  auto pts3 = gamma_curve(s3, 5.0, 9);
  CHECK(pts3.back().first == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-8));
}

TEST_CASE("exit points are consistent under forward re-tracing") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(0.0, 5.0), ux(-1.0, 1.0);
  auto speeds = {constant_speed(1.3), affine_speed(1.0, 0.4)};
  for (const auto& s : speeds) {
    for (int k = 0; k < 5000; ++k) {
      double t = ut(rng), x = ux(rng);
      ExitRecord e = backward_exit(s, t, x);
      double back = forward_to(s, e.t_b, e.x_b, t);
      CHECK(std::abs(back - x) <= 1e-8);
    }
  }
}

TEST_CASE("regions tile the slab and match the corner characteristic") {
  auto s = affine_speed(1.0, 0.4);
  const int nt = 200, nx = 200;
  const double t_max = 4.0;

  // dense corner curve for the oracle comparison
  auto gpts = gamma_curve(s, t_max, 4001);
  auto gamma_x = [&](double t) {
    if (t >= gpts.back().first) return 2.0;  // exited; everything is below
    double dt = gpts[1].first - gpts[0].first;
    int i = std::min(static_cast<int>(t / dt), static_cast<int>(gpts.size()) - 2);
    double th = (t - gpts[static_cast<std::size_t>(i)].first) / dt;
    return (1 - th) * gpts[static_cast<std::size_t>(i)].second +
           th * gpts[static_cast<std::size_t>(i + 1)].second;
  };

  int counted = 0;
  for (int it = 0; it < nt; ++it)
    for (int ix = 0; ix < nx; ++ix) {
      double t = t_max * it / (nt - 1);
      double x = -1.0 + 2.0 * ix / (nx - 1);
      ExitRecord e = backward_exit(s, t, x);
      ++counted;
      double gx = gamma_x(t);
      if (std::abs(x - gx) > 1e-6) {  // off the tolerance band
        if (x < gx)
          CHECK(e.region == Region::QMinus);
        else
          CHECK(e.region == Region::QPlus);
      }
    }
  CHECK(counted == nt * nx);
}

TEST_CASE("exit time gradients stay bounded on both sides of the corner curve") {
  auto s = affine_speed(1.0, 0.4);
  const int nt = 120, nx = 240;
  const double t_max = 3.0;
  const double dt = t_max / (nt - 1), dx = 2.0 / (nx - 1);
  Eigen::MatrixXd tb(nt, nx);
  Eigen::MatrixXi reg(nt, nx);
  for (int it = 0; it < nt; ++it)
    for (int ix = 0; ix < nx; ++ix) {
      ExitRecord e = backward_exit(s, it * dt, -1.0 + ix * dx);
      tb(it, ix) = e.t_b;
      reg(it, ix) = static_cast<int>(e.region);
    }
  double worst = 0.0;
  for (int it = 0; it + 1 < nt; ++it)
    for (int ix = 0; ix + 1 < nx; ++ix) {
      if (reg(it, ix) == reg(it + 1, ix))
        worst = std::max(worst, std::abs(tb(it + 1, ix) - tb(it, ix)) / dt);
      if (reg(it, ix) == reg(it, ix + 1))
        worst = std::max(worst, std::abs(tb(it, ix + 1) - tb(it, ix)) / dx);
    }
  // |dt_b/dt| <= 1 and |dt_b/dx| <= 1/lambda_m for same-side differences
  CHECK(worst <= 1.0 / s.lambda_m + 1.0);
}
