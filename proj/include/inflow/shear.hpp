#pragma once

#include <functional>
#include <string>

#include "inflow/grid3d.hpp"

namespace inflow {

/// Unidirectional base flow (U(x2,x3), 0, 0) with analytic derivatives.
struct ShearProfile {
  std::string name;
  std::function<double(double, double)> U;
  std::function<Eigen::Vector2d(double, double)> gradU;            // (d2U, d3U)
  std::function<Eigen::Vector3d(double, double)> hessU;            // (d22U, d23U, d33U)
  double min_U = 1.0;
  double max_U = 1.0;

  Eigen::Vector3d vorticity(double x2, double x3) const {
    Eigen::Vector2d gu = gradU(x2, x3);
    return {0.0, gu[1], -gu[0]};
  }
};

ShearProfile plug_profile(double c);
/// U = c + cos(k*pi*x2); the lateral-vanishing condition holds for integer k.
ShearProfile cosine_shear_profile(double c, int k);
/// U = c + cos(pi*x2) cos(pi*x3)
ShearProfile product_cosine_profile(double c);

VecField3 shear_vorticity(const ShearProfile& profile, const Grid3& g);

/// max over lateral faces of |d_i U| on {x_i = +-1} (i = 2,3); zero for
/// admissible profiles.
double lateral_vanishing_residual(const ShearProfile& profile, const Grid3& g);

/// ||grad U||_{W^{2,p}} / (min U^2 / (1 + min U)) — the gradient-smallness
/// ratio; the admissible threshold is configuration, not theory.
double shear_smallness_ratio(const ShearProfile& profile, const Grid3& g, double p);

}  // namespace inflow
