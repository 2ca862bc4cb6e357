#pragma once

#include <cmath>
#include <cstddef>

namespace inflow::quad {

// 15-point Kronrod extension of 7-point Gauss, nodes on [-1,1].
inline constexpr double kron_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kron_w[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gauss_w[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
inline void gk15(F&& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  double fc = f(c);
  double kr = kron_w[7] * fc;
  double gs = gauss_w[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double f1 = f(c - hl * kron_x[i]);
    double f2 = f(c + hl * kron_x[i]);
    kr += kron_w[i] * (f1 + f2);
    if (i % 2 == 1) gs += gauss_w[i / 2] * (f1 + f2);
  }
  result = kr * hl;
  err = std::abs((kr - gs) * hl);
}

/// Adaptive Gauss--Kronrod to absolute tolerance `tol`.
template <class F>
double adaptive(F&& f, double a, double b, double tol, int depth = 0) {
  double r, e;
  gk15(f, a, b, r, e);
  if (e <= tol || depth >= 24 || b - a < 1e-14) return r;
  double m = 0.5 * (a + b);
  return adaptive(f, a, m, 0.5 * tol, depth + 1) + adaptive(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace inflow::quad
