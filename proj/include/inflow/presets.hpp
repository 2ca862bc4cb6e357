#pragma once

#include <string>

#include "inflow/pipe_euler.hpp"
#include "inflow/quasilinear1d.hpp"
#include "inflow/transport1d.hpp"

namespace inflow::presets {

/// Named 1D speed fields: "unit" (+1), "negunit" (-1), "affine" (a + b x),
/// "const" (value a).
SpeedField1D speed(const std::string& name, double a = 1.0, double b = 0.0);

/// Named scalar data: "zero", "const" (amp), "sine" (amp*sin(mode*pi*x)),
/// "cosbump" (amp*(1+cos(pi x))/2), "poly4" ((1+x/4)^4 scaled by amp).
std::function<double(double)> scalar1d(const std::string& name, double amp = 1.0,
                                       int mode = 1);
std::function<double(double)> scalar1d_derivative(const std::string& name, double amp = 1.0,
                                                  int mode = 1);

/// Burgers system problem with the compatible cosine-bump datum of the given
/// amplitude and silent inflow.
SystemProblem burgers_bump(double amplitude, double eps0 = 0.05);

/// Shear profile by preset name: "plug" (c), "cosine-shear" (c, k),
/// "product-cosine" (c).
ShearProfile shear(const std::string& name, double c, int k = 1);

/// Compatible pipe data: uniform end-face pulse v_b = scale*sin^2(pi t / 5)
/// for t < 5 plus a solenoidal interior bump of the same scale; all
/// structural conditions hold by construction.
struct PipeCase {
  PipeBoundaryData bdata;
  std::function<Eigen::Vector3d(double, double, double)> v0;
  std::function<Eigen::Vector3d(double, double, double)> omega0;
};

PipeCase pipe_pulse(double scale);          // v0 = 0, boundary pulse only
PipeCase pipe_bump_and_pulse(double scale); // interior bump + boundary pulse

/// Divergence-free swirl with positive axial speed, tangential on the
/// lateral faces; used by the invariance checks.
std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)> lateral_swirl(double u1);

}  // namespace inflow::presets
