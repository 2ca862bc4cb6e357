#pragma once

#include <Eigen/Dense>

#include <vector>

namespace inflow {

/// One scalar component sampled on [0, horizon] x [-1, 1].
/// Row m holds time m*dt; column j holds node -1 + j*dx.
/// Evaluation is linear in t and local cubic (Catmull-Rom) in x.
struct Slab1D {
  Eigen::MatrixXd a;  // (M+1) x N
  double dt = 0.0;

  Slab1D() = default;
  Slab1D(int time_samples, int grid_n, double dt_)
      : a(Eigen::MatrixXd::Zero(time_samples, grid_n)), dt(dt_) {}

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
  double dx() const { return 2.0 / (cols() - 1); }
  double horizon() const { return dt * (rows() - 1); }

  double eval(double t, double x) const;
  double eval_row(int m, double x) const;

  double sup_norm() const { return a.cwiseAbs().maxCoeff(); }

  /// max |d2/dx2| by second differences, a proxy for the C^2 size.
  double c2_seminorm() const;

  /// Centered in the interior, one-sided second order at edges.
  Slab1D time_derivative() const;
  Slab1D space_derivative() const;
};

/// Mollifies with a tensor bump kernel of radius `radius` in both t and x,
/// after constant extension beyond all four slab edges. The discrete kernel
/// is normalized per axis, so constants are reproduced exactly and affine
/// profiles are reproduced away from the edges.
Slab1D mollify(const Slab1D& in, double radius);

using VectorSlab1D = std::vector<Slab1D>;

}  // namespace inflow
