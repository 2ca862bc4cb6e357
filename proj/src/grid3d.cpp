#include "inflow/grid3d.hpp"

#include <algorithm>
#include <cmath>

namespace inflow {

Field3 sample_scalar(const Grid3& g, const std::function<double(double, double, double)>& f) {
  Field3 out(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        out[g.idx(i, j, k)] = f(g.node(i), g.node(j), g.node(k));
  return out;
}

VecField3 sample_vector(const Grid3& g,
                        const std::function<Eigen::Vector3d(double, double, double)>& f) {
  VecField3 out{Field3(g.size()), Field3(g.size()), Field3(g.size())};
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Eigen::Vector3d v = f(g.node(i), g.node(j), g.node(k));
        int id = g.idx(i, j, k);
        out[0][id] = v[0];
        out[1][id] = v[1];
        out[2][id] = v[2];
      }
  return out;
}

Field3 derivative(const Grid3& g, const Field3& f, int axis) {
  const int n = g.n;
  const double h = g.dx();
  const int stride = axis == 0 ? n * n : (axis == 1 ? n : 1);
  Field3 out(g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        int id = g.idx(i, j, k);
        int pos = axis == 0 ? i : (axis == 1 ? j : k);
        if (pos == 0)
          out[id] = (-11.0 * f[id] + 18.0 * f[id + stride] - 9.0 * f[id + 2 * stride] +
                     2.0 * f[id + 3 * stride]) /
                    (6.0 * h);
        else if (pos == n - 1)
          out[id] = (11.0 * f[id] - 18.0 * f[id - stride] + 9.0 * f[id - 2 * stride] -
                     2.0 * f[id - 3 * stride]) /
                    (6.0 * h);
        else
          out[id] = (f[id + stride] - f[id - stride]) / (2.0 * h);
      }
  return out;
}

Field3 divergence(const Grid3& g, const VecField3& v) {
  Field3 out = derivative(g, v[0], 0);
  out += derivative(g, v[1], 1);
  out += derivative(g, v[2], 2);
  return out;
}

VecField3 curl(const Grid3& g, const VecField3& v) {
  VecField3 out;
  out[0] = derivative(g, v[2], 1) - derivative(g, v[1], 2);
  out[1] = derivative(g, v[0], 2) - derivative(g, v[2], 0);
  out[2] = derivative(g, v[1], 0) - derivative(g, v[0], 1);
  return out;
}

namespace {

double trapz_weight(const Grid3& g, int i) { return (i == 0 || i == g.n - 1) ? 0.5 : 1.0; }

template <class Pointwise>
double lp_accumulate(const Grid3& g, double p, double alpha, Pointwise&& val) {
  const double h3 = g.dx() * g.dx() * g.dx();
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double wx = alpha != 0.0 ? std::exp(-alpha * g.node(i)) : 1.0;
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        double w = trapz_weight(g, i) * trapz_weight(g, j) * trapz_weight(g, k);
        acc += w * std::pow(wx * std::abs(val(g.idx(i, j, k))), p);
      }
  }
  return acc * h3;
}

}  // namespace

double lp_norm(const Grid3& g, const Field3& f, double p, double alpha) {
  return std::pow(lp_accumulate(g, p, alpha, [&](int id) { return f[id]; }), 1.0 / p);
}

double lp_norm(const Grid3& g, const VecField3& v, double p, double alpha) {
  return std::pow(lp_accumulate(g, p, alpha,
                                [&](int id) {
                                  return std::sqrt(v[0][id] * v[0][id] + v[1][id] * v[1][id] +
                                                   v[2][id] * v[2][id]);
                                }),
                  1.0 / p);
}

double w1p_norm(const Grid3& g, const Field3& f, double p) {
  double acc = std::pow(lp_norm(g, f, p), p);
  for (int a = 0; a < 3; ++a) acc += std::pow(lp_norm(g, derivative(g, f, a), p), p);
  return std::pow(acc, 1.0 / p);
}

double w1p_norm(const Grid3& g, const VecField3& v, double p) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) acc += std::pow(w1p_norm(g, v[c], p), p);
  return std::pow(acc, 1.0 / p);
}

double w2p_norm(const Grid3& g, const Field3& f, double p) {
  double acc = std::pow(w1p_norm(g, f, p), p);
  for (int a = 0; a < 3; ++a) {
    Field3 da = derivative(g, f, a);
    for (int b = a; b < 3; ++b) acc += std::pow(lp_norm(g, derivative(g, da, b), p), p);
  }
  return std::pow(acc, 1.0 / p);
}

double w2p_norm(const Grid3& g, const VecField3& v, double p) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) acc += std::pow(w2p_norm(g, v[c], p), p);
  return std::pow(acc, 1.0 / p);
}

double face_integral(const Grid3& g, const Face2& f) {
  const double h2 = g.dx() * g.dx();
  double acc = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int k = 0; k < g.n; ++k)
      acc += trapz_weight(g, j) * trapz_weight(g, k) * f(j, k);
  return acc * h2;
}

double face_lp_norm(const Grid3& g, const Face2& f, double p, double weight) {
  const double h2 = g.dx() * g.dx();
  double acc = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int k = 0; k < g.n; ++k)
      acc += trapz_weight(g, j) * trapz_weight(g, k) *
             std::pow(weight * std::abs(f(j, k)), p);
  return std::pow(acc * h2, 1.0 / p);
}

double face_w1p_norm(const Grid3& g, const Face2& f, double p, double weight) {
  const int n = g.n;
  const double h = g.dx();
  Face2 dj(n, n), dk(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == 0)
        dj(j, k) = (-3 * f(0, k) + 4 * f(1, k) - f(2, k)) / (2 * h);
      else if (j == n - 1)
        dj(j, k) = (3 * f(n - 1, k) - 4 * f(n - 2, k) + f(n - 3, k)) / (2 * h);
      else
        dj(j, k) = (f(j + 1, k) - f(j - 1, k)) / (2 * h);
      if (k == 0)
        dk(j, k) = (-3 * f(j, 0) + 4 * f(j, 1) - f(j, 2)) / (2 * h);
      else if (k == n - 1)
        dk(j, k) = (3 * f(j, n - 1) - 4 * f(j, n - 2) + f(j, n - 3)) / (2 * h);
      else
        dk(j, k) = (f(j, k + 1) - f(j, k - 1)) / (2 * h);
    }
  double acc = std::pow(face_lp_norm(g, f, p, weight), p) +
               std::pow(face_lp_norm(g, dj, p, weight), p) +
               std::pow(face_lp_norm(g, dk, p, weight), p);
  return std::pow(acc, 1.0 / p);
}

Face2 extract_face_x1(const Grid3& g, const Field3& f, int i_face) {
  Face2 out(g.n, g.n);
  for (int j = 0; j < g.n; ++j)
    for (int k = 0; k < g.n; ++k) out(j, k) = f[g.idx(i_face, j, k)];
  return out;
}

double lateral_tangential_sup(const Grid3& g, const VecField3& v) {
  double best = 0.0;
  const int n = g.n;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k)
      for (int j : {0, n - 1}) {  // faces x2 = -1, +1: tangential are comps 1 and 3
        int id = g.idx(i, j, k);
        best = std::max(best, std::abs(v[0][id]) + std::abs(v[2][id]));
      }
    for (int j = 0; j < n; ++j)
      for (int k : {0, n - 1}) {  // faces x3 = -1, +1: tangential are comps 1 and 2
        int id = g.idx(i, j, k);
        best = std::max(best, std::abs(v[0][id]) + std::abs(v[1][id]));
      }
  }
  return best;
}

AxialCubicCell locate_axial_cubic(const Grid3& g, double x1, double x2, double x3) {
  const int n = g.n;
  const double h = g.dx();
  auto cellof = [&](double x, int& cell, double& frac) {
    double u = (x + 1.0) / h;
    int c = static_cast<int>(std::floor(u));
    if (c < 0) c = 0;
    if (c > n - 2) c = n - 2;
    cell = c;
    frac = std::clamp(u - c, 0.0, 1.0);
  };
  int ci, cj, ck;
  double t;
  AxialCubicCell c;
  cellof(x1, ci, t);
  cellof(x2, cj, c.fj);
  cellof(x3, ck, c.fk);
  c.jk = cj * n + ck;
  c.sj = n;

  // Catmull-Rom weights for nodes ci-1 .. ci+2
  double w[4];
  w[0] = 0.5 * (-t + 2.0 * t * t - t * t * t);
  w[1] = 0.5 * (2.0 - 5.0 * t * t + 3.0 * t * t * t);
  w[2] = 0.5 * (t + 4.0 * t * t - 3.0 * t * t * t);
  w[3] = 0.5 * (-t * t + t * t * t);
  int idx[4] = {ci - 1, ci, ci + 1, ci + 2};
  // fold linear-extrapolation ghosts back into the boundary nodes
  if (idx[0] < 0) {
    w[1] += 2.0 * w[0];
    w[2] -= w[0];
    w[0] = 0.0;
    idx[0] = 0;
  }
  if (idx[3] > n - 1) {
    w[2] += 2.0 * w[3];
    w[1] -= w[3];
    w[3] = 0.0;
    idx[3] = n - 1;
  }
  const int nn = n * n;
  for (int a = 0; a < 4; ++a) {
    c.plane[a] = idx[a] * nn;
    c.wi[a] = w[a];
  }
  return c;
}

TriCell locate_cell(const Grid3& g, double x1, double x2, double x3) {
  const int n = g.n;
  const double h = g.dx();
  auto clampi = [&](double x, int& cell, double& frac) {
    double u = (x + 1.0) / h;
    int c = static_cast<int>(std::floor(u));
    if (c < 0) c = 0;
    if (c > n - 2) c = n - 2;
    cell = c;
    frac = std::clamp(u - c, 0.0, 1.0);
  };
  int ci, cj, ck;
  double fi, fj, fk;
  clampi(x1, ci, fi);
  clampi(x2, cj, fj);
  clampi(x3, ck, fk);
  TriCell c;
  c.base = g.idx(ci, cj, ck);
  c.si = n * n;
  c.sj = n;
  c.sk = 1;
  const double gi = 1.0 - fi, gj = 1.0 - fj, gk = 1.0 - fk;
  c.w[0] = gi * gj * gk;
  c.w[1] = gi * gj * fk;
  c.w[2] = gi * fj * gk;
  c.w[3] = gi * fj * fk;
  c.w[4] = fi * gj * gk;
  c.w[5] = fi * gj * fk;
  c.w[6] = fi * fj * gk;
  c.w[7] = fi * fj * fk;
  return c;
}

}  // namespace inflow
