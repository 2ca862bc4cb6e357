#include "inflow/presets.hpp"

#include <cmath>

#include "inflow/errors.hpp"

namespace inflow::presets {

namespace {
constexpr double kPi = 3.14159265358979323846;

// bump-profile pieces for the solenoidal interior datum; low wavenumber so
// finite-difference monitors see trig-scale derivative ratios
double psi1(double s) { return 0.5 * (1.0 + std::cos(kPi * s)); }
double dpsi1(double s) { return -0.5 * kPi * std::sin(kPi * s); }
double gq(double s) { return std::sin(kPi * s); }
double dgq(double s) { return kPi * std::cos(kPi * s); }
double ddgq(double s) { return -kPi * kPi * std::sin(kPi * s); }

double pulse(double t) { return t < 5.0 ? std::pow(std::sin(kPi * t / 5.0), 2.0) : 0.0; }
double dpulse(double t) {
  return t < 5.0 ? (kPi / 5.0) * std::sin(2.0 * kPi * t / 5.0) : 0.0;
}
}  // namespace

SpeedField1D speed(const std::string& name, double a, double b) {
  if (name == "unit") return constant_speed(1.0);
  if (name == "negunit") return constant_speed(-1.0);
  if (name == "const") return constant_speed(a);
  if (name == "affine") {
    double lo = std::min(a - std::abs(b), a + std::abs(b));
    double hi = std::max(std::abs(a - b), std::abs(a + b));
    if (lo <= 0.0) throw ConfigError("affine speed changes sign on [-1,1]");
    SpeedField1D s;
    s.eval = [a, b](double, double x) { return a + b * x; };
    s.lambda_m = lo;
    s.lip_bound = std::abs(b);
    s.sign = a > 0 ? +1 : -1;
    (void)hi;
    return s;
  }
  throw ConfigError("unknown speed preset: " + name);
}

std::function<double(double)> scalar1d(const std::string& name, double amp, int mode) {
  if (name == "zero") return [](double) { return 0.0; };
  if (name == "const") return [amp](double) { return amp; };
  if (name == "sine")
    return [amp, mode](double x) { return amp * std::sin(mode * kPi * x); };
  if (name == "cosbump")
    return [amp](double x) { return amp * 0.5 * (1.0 + std::cos(kPi * x)); };
  if (name == "poly4")
    return [amp](double x) { return amp * std::pow(1.0 + 0.25 * x, 4.0); };
  throw ConfigError("unknown scalar preset: " + name);
}

std::function<double(double)> scalar1d_derivative(const std::string& name, double amp,
                                                  int mode) {
  if (name == "zero" || name == "const") return [](double) { return 0.0; };
  if (name == "sine")
    return [amp, mode](double x) { return amp * mode * kPi * std::cos(mode * kPi * x); };
  if (name == "cosbump")
    return [amp](double x) { return -amp * 0.5 * kPi * std::sin(kPi * x); };
  if (name == "poly4")
    return [amp](double x) { return amp * std::pow(1.0 + 0.25 * x, 3.0); };
  throw ConfigError("unknown scalar preset: " + name);
}

SystemProblem burgers_bump(double amplitude, double eps0) {
  SystemProblem pb;
  pb.system = make_flux_system("burgers");
  pb.V0 = [amplitude](double x) {
    Eigen::VectorXd v(1);
    v[0] = amplitude * 0.5 * (1.0 + std::cos(kPi * x));
    return v;
  };
  pb.V0_prime = [amplitude](double x) {
    Eigen::VectorXd v(1);
    v[0] = -amplitude * 0.5 * kPi * std::sin(kPi * x);
    return v;
  };
  pb.b = {[](double) { return 0.0; }};
  pb.b_prime = {[](double) { return 0.0; }};
  pb.eps0_budget = eps0;
  return pb;
}

ShearProfile shear(const std::string& name, double c, int k) {
  if (name == "plug") return plug_profile(c);
  if (name == "cosine-shear") return cosine_shear_profile(c, k);
  if (name == "product-cosine") return product_cosine_profile(c);
  throw ConfigError("unknown shear profile preset: " + name);
}

PipeCase pipe_pulse(double scale) {
  PipeCase pc;
  pc.bdata.v_b_minus = [scale](double t, double, double) { return scale * pulse(t); };
  pc.bdata.v_b_plus = pc.bdata.v_b_minus;
  pc.bdata.dt_v_b_minus = [scale](double t, double, double) { return scale * dpulse(t); };
  pc.bdata.dt_v_b_plus = pc.bdata.dt_v_b_minus;
  pc.bdata.omega_b_minus = [](double, double, double) {
    return Eigen::Vector3d::Zero().eval();
  };
  pc.bdata.dt_omega_b_minus = pc.bdata.omega_b_minus;
  pc.v0 = [](double, double, double) { return Eigen::Vector3d::Zero().eval(); };
  pc.omega0 = pc.v0;
  return pc;
}

PipeCase pipe_bump_and_pulse(double scale) {
  PipeCase pc = pipe_pulse(scale);
  // v0 = a (0, d3 phi, -d2 phi), phi = psi1(x1) gq(x2) gq(x3): solenoidal,
  // tangential on the lateral faces, vanishing with its curl on the end faces
  const double a = scale;
  pc.v0 = [a](double x1, double x2, double x3) {
    return Eigen::Vector3d(0.0, a * psi1(x1) * gq(x2) * dgq(x3),
                           -a * psi1(x1) * dgq(x2) * gq(x3))
        .eval();
  };
  pc.omega0 = [a](double x1, double x2, double x3) {
    double o1 = -a * psi1(x1) * (ddgq(x2) * gq(x3) + gq(x2) * ddgq(x3));
    double o2 = a * dpsi1(x1) * dgq(x2) * gq(x3);
    double o3 = a * dpsi1(x1) * gq(x2) * dgq(x3);
    return Eigen::Vector3d(o1, o2, o3).eval();
  };
  return pc;
}

std::function<Eigen::Vector3d(double, const Eigen::Vector3d&)> lateral_swirl(double u1) {
  return [u1](double, const Eigen::Vector3d& x) {
    double x2 = x[1], x3 = x[2];
    double aa = 1.0 - x2 * x2, bb = 1.0 - x3 * x3;
    double d3 = aa * aa * 2.0 * bb * (-2.0 * x3);
    double d2 = 2.0 * aa * (-2.0 * x2) * bb * bb;
    return Eigen::Vector3d(u1, d3, -d2).eval();
  };
}

}  // namespace inflow::presets
