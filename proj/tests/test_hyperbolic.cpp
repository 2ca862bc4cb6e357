#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "inflow/errors.hpp"
#include "inflow/flux_system.hpp"

using namespace inflow;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

FluxSystem constant_matrix_system(const Eigen::MatrixXd& A) {
  FluxSystem s;
  s.n = static_cast<int>(A.rows());
  s.name = "adhoc";
  s.base_state = Eigen::VectorXd::Zero(s.n);
  s.flux = [A](const Eigen::VectorXd& u) { return (A * u).eval(); };
  s.jacobian = [A](const Eigen::VectorXd&) { return A; };
  return s;
}

}  // namespace

TEST_CASE("jacobian matches flux derivative") {
  auto burgers = make_flux_system("burgers");
  CHECK(jacobian_fd_check(burgers, vec1(1.0)) <= 1e-6);
  CHECK(burgers.jacobian(vec1(1.0))(0, 0) == doctest::Approx(1.0));

  auto lin = make_flux_system("linear2");
  CHECK(jacobian_fd_check(lin, vec2(0.3, -0.2)) <= 1e-11);  // zero up to rounding

  // d/dv v^{-2} = -2 v^{-3}
  auto ps = make_flux_system("psystem");
  CHECK(jacobian_fd_check(ps, vec2(1.0, 0.0)) <= 1e-6);
  Eigen::MatrixXd A = ps.jacobian(vec2(1.0, 0.0));
  CHECK(A(0, 1) == doctest::Approx(-1.0));
  CHECK(A(1, 0) == doctest::Approx(-2.0));
}

TEST_CASE("psystem flux rejects nonpositive specific volume") {
  auto ps = make_flux_system("psystem");
  CHECK_THROWS_AS((void)jacobian_fd_check(ps, vec2(0.01, 0.0)), std::domain_error);
}

TEST_CASE("eigendecompose: scalar and symmetric 2x2") {
  auto burgers = make_flux_system("burgers");
  EigenDecomposition d = eigendecompose(burgers, vec1(1.0));
  CHECK(d.lambdas[0] == doctest::Approx(1.0));
  CHECK(d.T(0, 0) == doctest::Approx(1.0));
  CHECK(d.T_inv(0, 0) == doctest::Approx(1.0));

  auto lin = make_flux_system("linear2");
  EigenDecomposition e = eigendecompose(lin, vec2(0.0, 0.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(e.lambdas[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(e.lambdas[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.T(0, 0) == doctest::Approx(inv_sqrt2));
  CHECK(e.T(1, 0) == doctest::Approx(-inv_sqrt2));
  CHECK(e.T(0, 1) == doctest::Approx(inv_sqrt2));
  CHECK(e.T(1, 1) == doctest::Approx(inv_sqrt2));

  Eigen::MatrixXd A = lin.jacobian(vec2(0, 0));
  CHECK(((A * e.T - e.T * e.lambdas.asDiagonal()).cwiseAbs().maxCoeff()) <= 1e-10);
  CHECK(((e.T * e.T_inv - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff()) <= 1e-10);
}

TEST_CASE("eigendecompose: psystem speeds are +-sqrt(2) at v=1") {
  auto ps = make_flux_system("psystem");
  EigenDecomposition d = eigendecompose(ps, vec2(1.0, 0.0));
  CHECK(d.lambdas[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
  CHECK(d.lambdas[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  Eigen::MatrixXd A = ps.jacobian(vec2(1.0, 0.0));
  for (int i = 0; i < 2; ++i) {
    Eigen::VectorXd r = d.T.col(i);
    CHECK(((A * r - d.lambdas[i] * r).cwiseAbs().maxCoeff()) <= 1e-10);
  }
}

TEST_CASE("eigendecompose error paths") {
  Eigen::MatrixXd rot(2, 2);
  rot << 0, 1, -1, 0;
  CHECK_THROWS_AS((void)eigendecompose(constant_matrix_system(rot), vec2(0, 0)),
                  HyperbolicityError);

  Eigen::MatrixXd nearzero(2, 2);
  nearzero << 1e-5, 0, 0, 1.0;
  CHECK_THROWS_AS((void)eigendecompose(constant_matrix_system(nearzero), vec2(0, 0)),
                  CharacteristicDegeneracyError);
}

TEST_CASE("characteristic frame round trip") {
  auto lin = make_flux_system("linear2");
  EigenDecomposition d = eigendecompose(lin, vec2(0, 0));

  Eigen::VectorXd z = to_characteristic(d, vec2(0, 0));
  CHECK(z.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  Eigen::VectorXd V = vec2(1.0, 0.0);
  Eigen::VectorXd f = to_characteristic(d, V);
  CHECK(((from_characteristic(d, f) - V).cwiseAbs().maxCoeff()) <= 1e-10);

  auto adv = make_flux_system("advection");
  EigenDecomposition id = eigendecompose(adv, vec1(0.0));
  CHECK(to_characteristic(id, vec1(0.7))(0) == doctest::Approx(0.7));
}

TEST_CASE("eigen residual over random states near the base point") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (const char* name : {"advection", "burgers", "linear2", "psystem"}) {
    auto sys = make_flux_system(name);
    for (int k = 0; k < 1000; ++k) {
      Eigen::VectorXd st = sys.base_state;
      for (int i = 0; i < sys.n; ++i) st[i] += u(rng);
      EigenDecomposition d = eigendecompose(sys, st);
      Eigen::MatrixXd A = sys.jacobian(st);
      CHECK(((A * d.T - d.T * d.lambdas.asDiagonal()).cwiseAbs().maxCoeff()) <= 1e-9);
      for (int i = 0; i + 1 < sys.n; ++i) CHECK(d.lambdas[i] <= d.lambdas[i + 1]);
    }
  }
}

TEST_CASE("decomposition is deterministic and the catalog is non-characteristic") {
  for (const char* name : {"advection", "burgers", "linear2", "psystem"}) {
    auto sys = make_flux_system(name);
    EigenDecomposition a = eigendecompose(sys, sys.base_state);
    EigenDecomposition b = eigendecompose(sys, sys.base_state);
    CHECK((a.T - b.T).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.T_inv - b.T_inv).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.lambdas - b.lambdas).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.lambdas.cwiseAbs().minCoeff() >= 0.5);
  }
}

TEST_CASE("constant-frame detection") {
  CHECK(has_constant_frame(make_flux_system("advection")));
  CHECK(has_constant_frame(make_flux_system("burgers")));
  CHECK(has_constant_frame(make_flux_system("linear2")));
  CHECK(!has_constant_frame(make_flux_system("psystem")));
}
