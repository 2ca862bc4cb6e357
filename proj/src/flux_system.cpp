#include "inflow/flux_system.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "inflow/errors.hpp"

namespace inflow {

double jacobian_fd_check(const FluxSystem& system, const Eigen::VectorXd& state) {
  const double step = 1e-5;
  const int n = system.n;
  Eigen::MatrixXd A = system.jacobian(state);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd up = state, dn = state;
    up[j] += step;
    dn[j] -= step;
    Eigen::VectorXd col = (system.flux(up) - system.flux(dn)) / (2.0 * step);
    worst = std::max(worst, (col - A.col(j)).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace {

void normalize_columns(Eigen::MatrixXd& T) {
  for (int j = 0; j < T.cols(); ++j) {
    double nrm = T.col(j).norm();
    if (nrm > 0.0) T.col(j) /= nrm;
    for (int i = 0; i < T.rows(); ++i) {
      if (std::abs(T(i, j)) > 1e-12) {
        if (T(i, j) < 0.0) T.col(j) = -T.col(j);
        break;
      }
    }
  }
}

}  // namespace

EigenDecomposition eigendecompose(const FluxSystem& system, const Eigen::VectorXd& state,
                                  double lambda_floor) {
  const int n = system.n;
  Eigen::MatrixXd A = system.jacobian(state);
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());

  EigenDecomposition out;
  out.lambdas.resize(n);
  out.T.resize(n, n);

  if (n == 1) {
    out.lambdas[0] = A(0, 0);
    out.T(0, 0) = 1.0;
  } else if (n == 2) {
    const double tr = A(0, 0) + A(1, 1);
    const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    double disc = tr * tr - 4.0 * det;
    if (disc < -1e-12 * scale * scale)
      throw HyperbolicityError("eigendecompose: complex eigenvalues for " + system.name);
    disc = std::max(disc, 0.0);
    const double sq = std::sqrt(disc);
    out.lambdas[0] = 0.5 * (tr - sq);
    out.lambdas[1] = 0.5 * (tr + sq);
    if (sq < 1e-10 * scale)
      throw HyperbolicityError("eigendecompose: repeated eigenvalue for " + system.name);
    for (int k = 0; k < 2; ++k) {
      // kernel of (A - lambda I), picking the better-conditioned row
      const double lam = out.lambdas[k];
      const double r0[2] = {A(0, 0) - lam, A(0, 1)};
      const double r1[2] = {A(1, 0), A(1, 1) - lam};
      const double n0 = std::hypot(r0[0], r0[1]);
      const double n1 = std::hypot(r1[0], r1[1]);
      if (n0 >= n1)
        out.T.col(k) << -r0[1], r0[0];
      else
        out.T.col(k) << -r1[1], r1[0];
    }
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
      throw HyperbolicityError("eigendecompose: solver failed for " + system.name);
    Eigen::VectorXcd ev = es.eigenvalues();
    for (int i = 0; i < n; ++i)
      if (std::abs(ev[i].imag()) > 1e-9 * scale)
        throw HyperbolicityError("eigendecompose: complex eigenvalues for " + system.name);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return ev[a].real() < ev[b].real(); });
    for (int k = 0; k < n; ++k) {
      out.lambdas[k] = ev[order[static_cast<std::size_t>(k)]].real();
      out.T.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]).real();
    }
  }

  normalize_columns(out.T);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(out.T);
  if (std::abs(lu.determinant()) < 1e-8)
    throw HyperbolicityError("eigendecompose: defective eigenvector set for " + system.name);
  out.T_inv = lu.inverse();

  for (int i = 0; i < n; ++i)
    if (std::abs(out.lambdas[i]) < lambda_floor)
      throw CharacteristicDegeneracyError("eigendecompose: |lambda_" + std::to_string(i) +
                                          "| below floor for " + system.name);
  return out;
}

FluxSystem make_flux_system(const std::string& name) {
  FluxSystem s;
  s.name = name;
  if (name == "advection") {
    s.n = 1;
    s.base_state = Eigen::VectorXd::Zero(1);
    s.flux = [](const Eigen::VectorXd& u) { return u; };
    s.jacobian = [](const Eigen::VectorXd&) {
      return Eigen::MatrixXd::Identity(1, 1).eval();
    };
  } else if (name == "burgers") {
    s.n = 1;
    s.base_state = Eigen::VectorXd::Ones(1);
    s.flux = [](const Eigen::VectorXd& u) {
      Eigen::VectorXd f(1);
      f[0] = 0.5 * u[0] * u[0];
      return f;
    };
    s.jacobian = [](const Eigen::VectorXd& u) {
      Eigen::MatrixXd a(1, 1);
      a(0, 0) = u[0];
      return a;
    };
  } else if (name == "linear2") {
    s.n = 2;
    s.base_state = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd A0(2, 2);
    A0 << 0, 1, 1, 0;
    s.flux = [A0](const Eigen::VectorXd& u) { return (A0 * u).eval(); };
    s.jacobian = [A0](const Eigen::VectorXd&) { return A0; };
  } else if (name == "psystem") {
    // state (v, u), pressure p(v) = v^{-2}; valid for v bounded away from 0
    s.n = 2;
    s.base_state.resize(2);
    s.base_state << 1.0, 0.0;
    s.flux = [](const Eigen::VectorXd& w) {
      if (w[0] <= 0.05)
        throw std::domain_error("psystem: specific volume too small");
      Eigen::VectorXd f(2);
      f[0] = -w[1];
      f[1] = std::pow(w[0], -2.0);
      return f;
    };
    s.jacobian = [](const Eigen::VectorXd& w) {
      if (w[0] <= 0.05)
        throw std::domain_error("psystem: specific volume too small");
      Eigen::MatrixXd a(2, 2);
      a << 0.0, -1.0, -2.0 * std::pow(w[0], -3.0), 0.0;
      return a;
    };
  } else {
    throw ConfigError("unknown flux system: " + name);
  }
  return s;
}

bool has_constant_frame(const FluxSystem& system, double probe) {
  const EigenDecomposition base = eigendecompose(system, system.base_state);
  for (int j = 0; j < system.n; ++j) {
    for (double sgn : {-1.0, 1.0}) {
      Eigen::VectorXd st = system.base_state;
      st[j] += sgn * probe;
      EigenDecomposition d = eigendecompose(system, st);
      if ((d.T - base.T).cwiseAbs().maxCoeff() > 1e-13) return false;
    }
  }
  return true;
}

}  // namespace inflow
