#include <doctest.h>

#include <cmath>

#include "inflow/grid3d.hpp"
#include "inflow/poisson3d.hpp"
#include "inflow/shear.hpp"

using namespace inflow;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("discrete div of discrete curl cancels to rounding") {
  // the one-dimensional difference operators act on distinct axes, so they
  // commute and the mixed terms cancel exactly
  for (int n : {17, 33}) {
    Grid3 g{n};
    VecField3 v = sample_vector(g, [](double x1, double x2, double x3) {
      return Eigen::Vector3d(std::sin(kPi * x2) * x3, std::cos(kPi * x1) * x3 * x3,
                             std::sin(kPi * x1 * 0.5) * x2);
    });
    CHECK(lp_norm(g, divergence(g, curl(g, v)), 4.0) <= 1e-11);
  }
}

TEST_CASE("lp norms against closed forms") {
  Grid3 g{33};
  Field3 one = Field3::Ones(g.size());
  CHECK(lp_norm(g, one, 4.0) == doctest::Approx(std::pow(8.0, 0.25)).epsilon(1e-12));
  // weighted volume of 1 with alpha=1: int e^{-4x} dx over (-1,1) times 4
  double exact = 4.0 * (std::exp(4.0) - std::exp(-4.0)) / 4.0;
  CHECK(lp_norm(g, one, 4.0, 1.0) ==
        doctest::Approx(std::pow(exact, 0.25)).epsilon(2e-3));  // trapezoid error
}

TEST_CASE("poisson: transform bases diagonalize the discrete operator exactly") {
  Grid3 g{17};
  const int n = g.n;
  const double h = g.dx();

  // Dirichlet eigenvector sin(m pi (x+1)/2) restricted to the grid
  for (int mode : {1, 3}) {
    Field3 rhs(g.size());
    auto f = [&](double x) { return std::sin(mode * kPi * (x + 1.0) / 2.0); };
    double mu = (2.0 - 2.0 * std::cos(mode * kPi / (n - 1.0))) / (h * h);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          rhs[g.idx(i, j, k)] = 3.0 * mu * f(g.node(i)) * f(g.node(j)) * f(g.node(k));
    Field3 u = poisson_solve(g, {Bc1D::Dirichlet, Bc1D::Dirichlet, Bc1D::Dirichlet}, rhs);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          worst = std::max(worst, std::abs(u[g.idx(i, j, k)] -
                                           f(g.node(i)) * f(g.node(j)) * f(g.node(k))));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("poisson: mixed Neumann problem converges at second order") {
  // manufactured u = cos(pi x1) cos(pi x2) cos(pi x3), homogeneous Neumann
  auto exact = [](double x1, double x2, double x3) {
    return std::cos(kPi * x1) * std::cos(kPi * x2) * std::cos(kPi * x3);
  };
  double prev = 0.0;
  for (int n : {17, 33}) {
    Grid3 g{n};
    Field3 rhs = sample_scalar(g, [&](double x1, double x2, double x3) {
      return 3.0 * kPi * kPi * exact(x1, x2, x3);
    });
    Field3 u = poisson_solve(g, {Bc1D::Neumann, Bc1D::Neumann, Bc1D::Neumann}, rhs, {}, true);
    Field3 ue = sample_scalar(g, exact);
    double mean = 0.0, wsum = 0.0;  // match the solver's trapezoid gauge
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) *
                     ((j == 0 || j == n - 1) ? 0.5 : 1.0) *
                     ((k == 0 || k == n - 1) ? 0.5 : 1.0);
          mean += w * ue[g.idx(i, j, k)];
          wsum += w;
        }
    ue.array() -= mean / wsum;
    double err = (u - ue).cwiseAbs().maxCoeff();
    if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.6);
    prev = err;
  }
}

TEST_CASE("poisson: inhomogeneous Neumann data enters correctly") {
  // u = x1^2 with -u'' = -2, du/dx1 = +-2 at the ends, flat laterally
  Grid3 g{17};
  Field3 rhs = Field3::Constant(g.size(), -2.0);
  Face2 glo = Face2::Constant(g.n, g.n, -2.0);
  Face2 ghi = Face2::Constant(g.n, g.n, 2.0);
  NeumannData nd;
  nd.x1_lo = &glo;
  nd.x1_hi = &ghi;
  Field3 u = poisson_solve(g, {Bc1D::Neumann, Bc1D::Neumann, Bc1D::Neumann}, rhs, nd, true);
  Field3 ue = sample_scalar(g, [](double x1, double, double) { return x1 * x1; });
  double mean = 0.0, wsum = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        double w = ((i == 0 || i == g.n - 1) ? 0.5 : 1.0) *
                   ((j == 0 || j == g.n - 1) ? 0.5 : 1.0) *
                   ((k == 0 || k == g.n - 1) ? 0.5 : 1.0);
        mean += w * ue[g.idx(i, j, k)];
        wsum += w;
      }
  ue.array() -= mean / wsum;
  CHECK((u - ue).cwiseAbs().maxCoeff() <= 1e-10);  // quadratic is exact for the 3-pt stencil
}

TEST_CASE("shear profiles: vorticity and admissibility") {
  Grid3 g{17};

  auto plug = plug_profile(1.0);
  VecField3 ws = shear_vorticity(plug, g);
  CHECK(lp_norm(g, ws, 2.0) == doctest::Approx(0.0));

  // U = c + cos(k pi x2): vorticity (0, 0, k pi sin(k pi x2))
  auto cosine = cosine_shear_profile(2.0, 1);
  CHECK(lateral_vanishing_residual(cosine, g) <= 1e-10);
  Eigen::Vector3d w = cosine.vorticity(0.25, 0.0);
  CHECK(w[0] == doctest::Approx(0.0));
  CHECK(w[1] == doctest::Approx(0.0));
  CHECK(w[2] == doctest::Approx(kPi * std::sin(kPi * 0.25)).epsilon(1e-12));

  auto pc = product_cosine_profile(2.0);
  CHECK(lateral_vanishing_residual(pc, g) <= 1e-10);
  Eigen::Vector3d w2 = pc.vorticity(0.3, -0.2);
  CHECK(w2[1] == doctest::Approx(-kPi * std::cos(kPi * 0.3) * std::sin(-kPi * 0.2)).epsilon(1e-12));
  CHECK(w2[2] == doctest::Approx(kPi * std::sin(kPi * 0.3) * std::cos(-kPi * 0.2)).epsilon(1e-12));
  // discrete curl of the base flow matches the analytic vorticity
  VecField3 us = sample_vector(g, [&](double, double x2, double x3) {
    return Eigen::Vector3d(pc.U(x2, x3), 0.0, 0.0);
  });
  VecField3 cw = curl(g, us);
  VecField3 wa = shear_vorticity(pc, g);
  VecField3 diff{cw[0] - wa[0], cw[1] - wa[1], cw[2] - wa[2]};
  CHECK(lp_norm(g, diff, 4.0) <= 5.0 * g.dx() * g.dx() * w1p_norm(g, wa, 4.0));

  CHECK(shear_smallness_ratio(plug, g, 4.0) == doctest::Approx(0.0));
  CHECK(shear_smallness_ratio(pc, g, 4.0) > 1.0);
}
