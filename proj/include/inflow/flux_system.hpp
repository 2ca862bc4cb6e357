#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace inflow {

/// An n-component conservative flux together with its Jacobian and a
/// reference constant state about which perturbations are measured.
struct FluxSystem {
  int n = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> flux;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  Eigen::VectorXd base_state;
  std::string name;
};

/// Sorted eigen-decomposition A = T diag(lambdas) T_inv with a deterministic
/// frame: columns of T have unit Euclidean norm and positive leading entry.
struct EigenDecomposition {
  Eigen::VectorXd lambdas;  // ascending
  Eigen::MatrixXd T;        // right eigenvectors as columns
  Eigen::MatrixXd T_inv;
};

/// Max-abs mismatch between jacobian(state) and a central difference of the
/// flux with step 1e-5. Flux evaluation failures propagate as domain errors.
double jacobian_fd_check(const FluxSystem& system, const Eigen::VectorXd& state);

/// Deterministic eigen-decomposition of jacobian(state).
/// Throws HyperbolicityError on complex/defective structure and
/// CharacteristicDegeneracyError when any |lambda_i| < lambda_floor.
EigenDecomposition eigendecompose(const FluxSystem& system, const Eigen::VectorXd& state,
                                  double lambda_floor = 1e-3);

inline Eigen::VectorXd to_characteristic(const EigenDecomposition& d, const Eigen::VectorXd& V) {
  return d.T_inv * V;
}
inline Eigen::VectorXd from_characteristic(const EigenDecomposition& d, const Eigen::VectorXd& f) {
  return d.T * f;
}

/// Catalog lookup: "advection", "burgers", "psystem", "linear2".
FluxSystem make_flux_system(const std::string& name);

/// True when the eigenvector frame is state-independent near the base state
/// (the cross-family coupling in the characteristic equations then vanishes).
bool has_constant_frame(const FluxSystem& system, double probe = 0.01);

}  // namespace inflow
