#include "inflow/shear.hpp"

#include <cmath>

namespace inflow {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ShearProfile plug_profile(double c) {
  ShearProfile p;
  p.name = "plug";
  p.U = [c](double, double) { return c; };
  p.gradU = [](double, double) { return Eigen::Vector2d::Zero().eval(); };
  p.hessU = [](double, double) { return Eigen::Vector3d::Zero().eval(); };
  p.min_U = p.max_U = c;
  return p;
}

ShearProfile cosine_shear_profile(double c, int k) {
  ShearProfile p;
  p.name = "cosine-shear";
  const double w = k * kPi;
  p.U = [c, w](double x2, double) { return c + std::cos(w * x2); };
  p.gradU = [w](double x2, double) {
    return Eigen::Vector2d(-w * std::sin(w * x2), 0.0).eval();
  };
  p.hessU = [w](double x2, double) {
    return Eigen::Vector3d(-w * w * std::cos(w * x2), 0.0, 0.0).eval();
  };
  p.min_U = c - 1.0;
  p.max_U = c + 1.0;
  return p;
}

ShearProfile product_cosine_profile(double c) {
  ShearProfile p;
  p.name = "product-cosine";
  p.U = [c](double x2, double x3) { return c + std::cos(kPi * x2) * std::cos(kPi * x3); };
  p.gradU = [](double x2, double x3) {
    return Eigen::Vector2d(-kPi * std::sin(kPi * x2) * std::cos(kPi * x3),
                           -kPi * std::cos(kPi * x2) * std::sin(kPi * x3))
        .eval();
  };
  p.hessU = [](double x2, double x3) {
    const double c2 = std::cos(kPi * x2), c3 = std::cos(kPi * x3);
    const double s2 = std::sin(kPi * x2), s3 = std::sin(kPi * x3);
    return Eigen::Vector3d(-kPi * kPi * c2 * c3, kPi * kPi * s2 * s3, -kPi * kPi * c2 * c3)
        .eval();
  };
  p.min_U = c - 1.0;
  p.max_U = c + 1.0;
  return p;
}

VecField3 shear_vorticity(const ShearProfile& profile, const Grid3& g) {
  return sample_vector(
      g, [&](double, double x2, double x3) { return profile.vorticity(x2, x3); });
}

double lateral_vanishing_residual(const ShearProfile& profile, const Grid3& g) {
  double worst = 0.0;
  for (int a = 0; a < g.n; ++a) {
    double s = g.node(a);
    for (double face : {-1.0, 1.0}) {
      worst = std::max(worst, std::abs(profile.gradU(face, s)[0]));  // d2U on x2 = +-1
      worst = std::max(worst, std::abs(profile.gradU(s, face)[1]));  // d3U on x3 = +-1
    }
  }
  return worst;
}

double shear_smallness_ratio(const ShearProfile& profile, const Grid3& g, double p) {
  VecField3 grad{Field3(g.size()), Field3(g.size()), Field3(g.size())};
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Eigen::Vector2d gu = profile.gradU(g.node(j), g.node(k));
        int id = g.idx(i, j, k);
        grad[0][id] = 0.0;
        grad[1][id] = gu[0];
        grad[2][id] = gu[1];
      }
  double num = w2p_norm(g, grad, p);
  double den = profile.min_U * profile.min_U / (1.0 + profile.min_U);
  return num / den;
}

}  // namespace inflow
