#include "inflow/poisson3d.hpp"

#include <cmath>
#include <vector>

#include "inflow/errors.hpp"

namespace inflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct LineBasis {
  Eigen::MatrixXd B, Binv;
  Eigen::VectorXd mu;
  int first_row = 0;  // grid index of the first unknown
  int m = 0;
};

LineBasis make_line_basis(int n, double h, Bc1D bc) {
  LineBasis lb;
  if (bc == Bc1D::Dirichlet) {
    lb.m = n - 2;
    lb.first_row = 1;
    lb.B.resize(lb.m, lb.m);
    lb.mu.resize(lb.m);
    for (int k = 0; k < lb.m; ++k) {
      double th = (k + 1) * kPi / (n - 1);
      lb.mu[k] = (2.0 - 2.0 * std::cos(th)) / (h * h);
      for (int j = 0; j < lb.m; ++j) lb.B(j, k) = std::sin((j + 1) * th);
    }
  } else {
    lb.m = n;
    lb.first_row = 0;
    lb.B.resize(n, n);
    lb.mu.resize(n);
    for (int k = 0; k < n; ++k) {
      double th = k * kPi / (n - 1);
      lb.mu[k] = (2.0 - 2.0 * std::cos(th)) / (h * h);
      for (int j = 0; j < n; ++j) lb.B(j, k) = std::cos(j * th);
    }
  }
  lb.Binv = lb.B.partialPivLu().inverse();
  return lb;
}

// Thomas solve of (-D1^2 + mu) u = r for one x1 line.
void line_solve_x1(Bc1D bc, int n, double h, double mu, const Eigen::VectorXd& r_full,
                   Eigen::VectorXd& u_full, bool& singular_mode) {
  const double ih2 = 1.0 / (h * h);
  singular_mode = false;
  if (bc == Bc1D::Dirichlet) {
    // unknowns at grid indices 1..n-2, off-diagonals -ih2
    const int m = n - 2;
    Eigen::VectorXd d(m), rhs(m);
    for (int i = 0; i < m; ++i) {
      d[i] = 2.0 * ih2 + mu;
      rhs[i] = r_full[i + 1];
    }
    for (int i = 1; i < m; ++i) {
      double w = -ih2 / d[i - 1];
      d[i] -= w * -ih2;
      rhs[i] -= w * rhs[i - 1];
    }
    u_full.setZero(n);
    double prev = rhs[m - 1] / d[m - 1];
    u_full[n - 2] = prev;
    for (int i = m - 2; i >= 0; --i) {
      prev = (rhs[i] + ih2 * prev) / d[i];
      u_full[i + 1] = prev;
    }
    return;
  }

  // Neumann rows: ends (2,-2)/h^2 + mu
  Eigen::VectorXd a(n), d(n), c(n), rhs = r_full;
  for (int i = 0; i < n; ++i) {
    a[i] = -ih2;
    c[i] = -ih2;
    d[i] = 2.0 * ih2 + mu;
  }
  c[0] = -2.0 * ih2;
  a[n - 1] = -2.0 * ih2;
  if (mu <= 1e-14 * ih2) {
    // pure-Neumann zero mode: project onto the range, pin u[0] = 0
    singular_mode = true;
    double wsum = n - 1.0;
    double acc = 0.5 * (rhs[0] + rhs[n - 1]);
    for (int i = 1; i + 1 < n; ++i) acc += rhs[i];
    double shift = acc / wsum;
    for (int i = 0; i < n; ++i) rhs[i] -= shift;
    // pinned reduced system over i = 1..n-1 (u0 = 0)
    for (int i = 2; i < n; ++i) {
      double w = a[i] / d[i - 1];
      d[i] -= w * c[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    u_full.setZero(n);
    u_full[n - 1] = rhs[n - 1] / d[n - 1];
    for (int i = n - 2; i >= 1; --i)
      u_full[i] = (rhs[i] - c[i] * u_full[i + 1]) / d[i];
    return;
  }
  for (int i = 1; i < n; ++i) {
    double w = a[i] / d[i - 1];
    d[i] -= w * c[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  u_full.resize(n);
  u_full[n - 1] = rhs[n - 1] / d[n - 1];
  for (int i = n - 2; i >= 0; --i)
    u_full[i] = (rhs[i] - c[i] * u_full[i + 1]) / d[i];
}

}  // namespace

Field3 poisson_solve(const Grid3& g, PoissonBc bc, Field3 rhs, const NeumannData& data,
                     bool zero_mean) {
  const int n = g.n;
  const double h = g.dx();
  const double two_over_h = 2.0 / h;

  // Neumann data enters as a right-hand-side correction in the face layer
  auto add_x1 = [&](int i, const Face2& f, double sgn) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) rhs[g.idx(i, j, k)] += sgn * two_over_h * f(j, k);
  };
  auto add_x2 = [&](int j, const Face2& f, double sgn) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) rhs[g.idx(i, j, k)] += sgn * two_over_h * f(i, k);
  };
  auto add_x3 = [&](int k, const Face2& f, double sgn) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rhs[g.idx(i, j, k)] += sgn * two_over_h * f(i, j);
  };
  if (data.x1_lo) add_x1(0, *data.x1_lo, -1.0);
  if (data.x1_hi) add_x1(n - 1, *data.x1_hi, +1.0);
  if (data.x2_lo) add_x2(0, *data.x2_lo, -1.0);
  if (data.x2_hi) add_x2(n - 1, *data.x2_hi, +1.0);
  if (data.x3_lo) add_x3(0, *data.x3_lo, -1.0);
  if (data.x3_hi) add_x3(n - 1, *data.x3_hi, +1.0);

  LineBasis b2 = make_line_basis(n, h, bc.x2);
  LineBasis b3 = make_line_basis(n, h, bc.x3);
  const int m2 = b2.m, m3 = b3.m;

  // forward transform per x1 layer
  std::vector<Eigen::MatrixXd> coeff(static_cast<std::size_t>(n));
  Eigen::MatrixXd slab(m2, m3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m2; ++j)
      for (int k = 0; k < m3; ++k)
        slab(j, k) = rhs[g.idx(i, j + b2.first_row, k + b3.first_row)];
    coeff[static_cast<std::size_t>(i)] = b2.Binv * slab * b3.Binv.transpose();
  }

  // per-mode x1 line solves
  Eigen::VectorXd line(n), sol(n);
  std::vector<Eigen::MatrixXd> out_coeff(static_cast<std::size_t>(n),
                                         Eigen::MatrixXd::Zero(m2, m3));
  bool had_singular = false;
  for (int a = 0; a < m2; ++a)
    for (int b = 0; b < m3; ++b) {
      double mu = b2.mu[a] + b3.mu[b];
      for (int i = 0; i < n; ++i) line[i] = coeff[static_cast<std::size_t>(i)](a, b);
      bool singular = false;
      line_solve_x1(bc.x1, n, h, mu, line, sol, singular);
      had_singular = had_singular || singular;
      for (int i = 0; i < n; ++i) out_coeff[static_cast<std::size_t>(i)](a, b) = sol[i];
    }
  if (had_singular && !zero_mean)
    throw PreconditionError("poisson_solve: all-Neumann problem requires the zero-mean gauge");

  // inverse transform
  Field3 u = Field3::Zero(g.size());
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd back = b2.B * out_coeff[static_cast<std::size_t>(i)] * b3.B.transpose();
    for (int j = 0; j < m2; ++j)
      for (int k = 0; k < m3; ++k)
        u[g.idx(i, j + b2.first_row, k + b3.first_row)] = back(j, k);
  }

  if (zero_mean) {
    double wsum = 0.0, acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0) *
                     ((k == 0 || k == n - 1) ? 0.5 : 1.0);
          wsum += w;
          acc += w * u[g.idx(i, j, k)];
        }
    u.array() -= acc / wsum;
  }
  return u;
}

}  // namespace inflow
