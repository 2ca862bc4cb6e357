#include "inflow/slab1d.hpp"

#include <algorithm>
#include <cmath>

namespace inflow {

namespace {

inline double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  return 0.5 * (2.0 * p1 + t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                                t * (3.0 * (p1 - p2) + p3 - p0))));
}

}  // namespace

double Slab1D::eval_row(int m, double x) const {
  const int n = cols();
  const double h = dx();
  double u = (x + 1.0) / h;
  int j = static_cast<int>(std::floor(u));
  if (j < 0) j = 0;
  if (j > n - 2) j = n - 2;
  const double t = u - j;
  const auto rowv = a.row(m);
  // linear-extrapolated ghosts at the edges
  const double pm1 = j - 1 >= 0 ? rowv[j - 1] : 2.0 * rowv[0] - rowv[1];
  const double pp2 = j + 2 < n ? rowv[j + 2] : 2.0 * rowv[n - 1] - rowv[n - 2];
  return catmull_rom(pm1, rowv[j], rowv[j + 1], pp2, t);
}

double Slab1D::eval(double t, double x) const {
  const int mrows = rows();
  double u = t / dt;
  int m = static_cast<int>(std::floor(u));
  if (m < 0) m = 0;
  if (m > mrows - 2) m = mrows - 2;
  const double th = std::clamp(u - m, 0.0, 1.0);
  return (1.0 - th) * eval_row(m, x) + th * eval_row(m + 1, x);
}

double Slab1D::c2_seminorm() const {
  const double h2 = dx() * dx();
  double best = 0.0;
  for (int m = 0; m < rows(); ++m)
    for (int j = 1; j + 1 < cols(); ++j)
      best = std::max(best, std::abs(a(m, j + 1) - 2.0 * a(m, j) + a(m, j - 1)) / h2);
  return best;
}

Slab1D Slab1D::time_derivative() const {
  Slab1D d(rows(), cols(), dt);
  const int mr = rows();
  for (int j = 0; j < cols(); ++j) {
    for (int m = 1; m + 1 < mr; ++m) d.a(m, j) = (a(m + 1, j) - a(m - 1, j)) / (2.0 * dt);
    d.a(0, j) = (-3.0 * a(0, j) + 4.0 * a(1, j) - a(2, j)) / (2.0 * dt);
    d.a(mr - 1, j) = (3.0 * a(mr - 1, j) - 4.0 * a(mr - 2, j) + a(mr - 3, j)) / (2.0 * dt);
  }
  return d;
}

Slab1D Slab1D::space_derivative() const {
  Slab1D d(rows(), cols(), dt);
  const double h = dx();
  const int n = cols();
  for (int m = 0; m < rows(); ++m) {
    for (int j = 1; j + 1 < n; ++j) d.a(m, j) = (a(m, j + 1) - a(m, j - 1)) / (2.0 * h);
    d.a(m, 0) = (-3.0 * a(m, 0) + 4.0 * a(m, 1) - a(m, 2)) / (2.0 * h);
    d.a(m, n - 1) = (3.0 * a(m, n - 1) - 4.0 * a(m, n - 2) + a(m, n - 3)) / (2.0 * h);
  }
  return d;
}

namespace {

std::vector<double> bump_taps(double step, double radius, int& half) {
  half = static_cast<int>(std::floor(radius / step - 1e-12));
  std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
  double sum = 0.0;
  for (int k = -half; k <= half; ++k) {
    double s = k * step / radius;
    double v = std::exp(-1.0 / (1.0 - s * s));
    w[static_cast<std::size_t>(k + half)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

Slab1D mollify(const Slab1D& in, double radius) {
  const int mr = in.rows(), n = in.cols();
  Slab1D mid = in, out = in;

  int ht = 0;
  std::vector<double> wt = bump_taps(in.dt, radius, ht);
  if (ht > 0) {
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < mr; ++m) {
        double acc = 0.0;
        for (int k = -ht; k <= ht; ++k)
          acc += wt[static_cast<std::size_t>(k + ht)] * in.a(std::clamp(m + k, 0, mr - 1), j);
        mid.a(m, j) = acc;
      }
  }

  int hx = 0;
  std::vector<double> wx = bump_taps(in.dx(), radius, hx);
  if (hx > 0) {
    for (int m = 0; m < mr; ++m)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = -hx; k <= hx; ++k)
          acc += wx[static_cast<std::size_t>(k + hx)] * mid.a(m, std::clamp(j + k, 0, n - 1));
        out.a(m, j) = acc;
      }
  } else {
    out = mid;
  }
  return out;
}

}  // namespace inflow
