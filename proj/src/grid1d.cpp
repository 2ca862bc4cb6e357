#include "inflow/grid1d.hpp"

#include <cmath>

namespace inflow {

ScalarField1D ScalarField1D::sample(const std::function<double(double)>& f, int n) {
  ScalarField1D out(n);
  const double h = 2.0 / (n - 1);
  for (int i = 0; i < n; ++i) out.values[i] = f(-1.0 + i * h);
  return out;
}

double ScalarField1D::weighted_sup_norm(double alpha, int sgn) const {
  double best = 0.0;
  const double h = dx();
  for (int i = 0; i < size(); ++i) {
    double x = -1.0 + i * h;
    best = std::max(best, std::exp(-alpha * sgn * x) * std::abs(values[i]));
  }
  return best;
}

ScalarField1D ScalarField1D::derivative() const {
  const int n = size();
  const double h = dx();
  ScalarField1D d(n);
  for (int i = 1; i + 1 < n; ++i) d.values[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
  d.values[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
  d.values[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
  return d;
}

double ScalarField1D::lipschitz_seminorm() const {
  return derivative().values.cwiseAbs().maxCoeff();
}

CubicSpline1D::CubicSpline1D(const ScalarField1D& f) : y_(f.values), dx_(f.dx()) {
  const int n = f.size();
  m_.resize(n);
  // clamped spline with FD endpoint slopes
  const auto& y = y_;
  const double h = dx_;
  double s0 = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
  double s1 = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] +
               3.0 * y[n - 5]) /
              (12.0 * h);
  Eigen::VectorXd a(n), b(n), c(n), r(n);
  a.setOnes();
  b.setConstant(4.0);
  c.setOnes();
  for (int i = 1; i + 1 < n; ++i) r[i] = 3.0 * (y[i + 1] - y[i - 1]) / h;
  b[0] = 1.0; c[0] = 0.0; r[0] = s0;
  b[n - 1] = 1.0; a[n - 1] = 0.0; r[n - 1] = s1;
  // Thomas
  for (int i = 1; i < n; ++i) {
    double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  m_[n - 1] = r[n - 1] / b[n - 1];
  for (int i = n - 2; i >= 0; --i) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
}

double CubicSpline1D::operator()(double x) const {
  const int n = static_cast<int>(y_.size());
  double u = (x + 1.0) / dx_;
  int i = static_cast<int>(std::floor(u));
  if (i < 0) i = 0;
  if (i > n - 2) i = n - 2;
  double t = u - i;
  const double y0 = y_[i], y1 = y_[i + 1];
  const double d0 = m_[i] * dx_, d1 = m_[i + 1] * dx_;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * d1;
}

}  // namespace inflow
