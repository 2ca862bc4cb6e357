#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>

namespace inflow {

/// Uniform collocated grid on the pipe (-1,1)^3, endpoints included.
/// Flat index (i,j,k) -> (i*n + j)*n + k; i is the axial (x1) index.
struct Grid3 {
  int n = 32;

  double dx() const { return 2.0 / (n - 1); }
  int size() const { return n * n * n; }
  int idx(int i, int j, int k) const { return (i * n + j) * n + k; }
  double node(int i) const { return -1.0 + i * dx(); }
};

using Field3 = Eigen::VectorXd;                 // scalar samples, Grid3::size()
using VecField3 = std::array<Eigen::VectorXd, 3>;
using Face2 = Eigen::MatrixXd;                  // (j,k) samples on an x1-face

Field3 sample_scalar(const Grid3& g, const std::function<double(double, double, double)>& f);
VecField3 sample_vector(const Grid3& g,
                        const std::function<Eigen::Vector3d(double, double, double)>& f);

/// Second-order partial derivative along axis (0,1,2), one-sided at faces.
Field3 derivative(const Grid3& g, const Field3& f, int axis);

Field3 divergence(const Grid3& g, const VecField3& v);
VecField3 curl(const Grid3& g, const VecField3& v);

/// Trapezoid-weighted L^p norm, optionally with the axial weight e^{-alpha x1}.
double lp_norm(const Grid3& g, const Field3& f, double p, double alpha = 0.0);
double lp_norm(const Grid3& g, const VecField3& v, double p, double alpha = 0.0);

/// (||f||_p^p + sum_a ||d_a f||_p^p)^{1/p}
double w1p_norm(const Grid3& g, const Field3& f, double p);
double w1p_norm(const Grid3& g, const VecField3& v, double p);

/// Adds the six distinct second derivatives.
double w2p_norm(const Grid3& g, const Field3& f, double p);
double w2p_norm(const Grid3& g, const VecField3& v, double p);

/// Trapezoid integral of a face sample over an x1-face (area element dx^2).
double face_integral(const Grid3& g, const Face2& f);

/// 2D L^p norm over an x1-face, optionally weighted by e^{-alpha x1} at that face.
double face_lp_norm(const Grid3& g, const Face2& f, double p, double weight = 1.0);

/// W^{1,p} norm on an x1-face (2D finite differences in x2, x3).
double face_w1p_norm(const Grid3& g, const Face2& f, double p, double weight = 1.0);

Face2 extract_face_x1(const Grid3& g, const Field3& f, int i_face);

/// sup over the four lateral faces of |t1| + |t2| where (t1,t2) are the
/// tangential components selected by the face normal.
double lateral_tangential_sup(const Grid3& g, const VecField3& v);

/// Trilinear interpolation helpers; coordinates are clamped to the box.
struct TriCell {
  int base = 0;            // idx(i,j,k) of the low corner
  int sj = 0, sk = 0, si = 0;
  double w[8] = {0};       // corner weights, order (i,j,k) bit pattern
};

TriCell locate_cell(const Grid3& g, double x1, double x2, double x3);

/// Cubic (Catmull-Rom) along x1, bilinear across (x2,x3). Along-path sampling
/// of grid fields is dominated by axial motion; the cubic axial weights keep
/// the sampling error smooth there.
struct AxialCubicCell {
  int plane[4] = {0, 0, 0, 0};  // flat offsets of the four axial planes
  double wi[4] = {0, 0, 0, 0};
  int jk = 0;                   // low-corner offset within a plane
  int sj = 0;                   // stride of the x2 index
  double fj = 0.0, fk = 0.0;
};

AxialCubicCell locate_axial_cubic(const Grid3& g, double x1, double x2, double x3);

inline double axial_cubic_eval(const Eigen::VectorXd& f, const AxialCubicCell& c) {
  const double gj = 1.0 - c.fj, gk = 1.0 - c.fk;
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    const double* p = f.data() + c.plane[a] + c.jk;
    acc += c.wi[a] * (gj * (gk * p[0] + c.fk * p[1]) + c.fj * (gk * p[c.sj] + c.fk * p[c.sj + 1]));
  }
  return acc;
}

inline double tri_eval(const Eigen::VectorXd& f, const TriCell& c) {
  const double* p = f.data() + c.base;
  return c.w[0] * p[0] + c.w[1] * p[c.sk] + c.w[2] * p[c.sj] + c.w[3] * p[c.sj + c.sk] +
         c.w[4] * p[c.si] + c.w[5] * p[c.si + c.sk] + c.w[6] * p[c.si + c.sj] +
         c.w[7] * p[c.si + c.sj + c.sk];
}

}  // namespace inflow
