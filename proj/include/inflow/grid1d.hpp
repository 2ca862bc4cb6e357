#pragma once

#include <Eigen/Dense>

#include <functional>

namespace inflow {

/// Uniform grid samples of a function on [-1,1], endpoints included.
struct ScalarField1D {
  Eigen::VectorXd values;

  ScalarField1D() = default;
  explicit ScalarField1D(int n) : values(Eigen::VectorXd::Zero(n)) {}

  int size() const { return static_cast<int>(values.size()); }
  double dx() const { return 2.0 / (size() - 1); }
  double node(int i) const { return -1.0 + i * dx(); }

  static ScalarField1D sample(const std::function<double(double)>& f, int n);

  double sup_norm() const { return values.cwiseAbs().maxCoeff(); }

  /// sup_x e^{-alpha*sgn*x} |f(x)|
  double weighted_sup_norm(double alpha, int sgn) const;

  /// max |f'| by second-order finite differences (one-sided at the ends).
  double lipschitz_seminorm() const;

  double w1inf_norm() const { return std::max(sup_norm(), lipschitz_seminorm()); }

  double left() const { return values[0]; }
  double right() const { return values[size() - 1]; }

  /// Second-order derivative samples on the same grid.
  ScalarField1D derivative() const;
};

/// Complete cubic spline through uniform samples; endpoint slopes are taken
/// from fourth-order one-sided differences so interior accuracy is O(h^4).
class CubicSpline1D {
 public:
  CubicSpline1D() = default;
  explicit CubicSpline1D(const ScalarField1D& f);
  double operator()(double x) const;

 private:
  Eigen::VectorXd y_, m_;  // values and node derivatives
  double dx_ = 1.0;
};

}  // namespace inflow
