#include "inflow/divcurl.hpp"

#include <cmath>

#include "inflow/errors.hpp"
#include "inflow/poisson3d.hpp"

namespace inflow {

namespace {

/// Gradient of the Neumann-lift potential with the ghost-reflection
/// convention at the faces, so v.nu is exact there.
VecField3 lift_gradient(const Grid3& g, const Field3& psi, const Face2& vb_minus,
                        const Face2& vb_plus) {
  const int n = g.n;
  VecField3 grad{derivative(g, psi, 0), derivative(g, psi, 1), derivative(g, psi, 2)};
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      grad[0][g.idx(0, j, k)] = vb_minus(j, k);
      grad[0][g.idx(n - 1, j, k)] = vb_plus(j, k);
    }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      grad[1][g.idx(i, 0, k)] = 0.0;
      grad[1][g.idx(i, n - 1, k)] = 0.0;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      grad[2][g.idx(i, j, 0)] = 0.0;
      grad[2][g.idx(i, j, n - 1)] = 0.0;
    }
  return grad;
}

}  // namespace

DivCurlResult divcurl_solve(const Grid3& g, const VecField3& omega, const Face2& vb_minus,
                            const Face2& vb_plus, const DivCurlOptions& opt) {
  DivCurlResult out;
  const int n = g.n;
  const double p = opt.p;

  const double flux_m = face_integral(g, vb_minus);
  const double flux_p = face_integral(g, vb_plus);
  out.flux_imbalance = std::abs(flux_p - flux_m);
  if (out.flux_imbalance >
      opt.flux_balance_rel_tol * std::max({1.0, std::abs(flux_m), std::abs(flux_p)}))
    throw PreconditionError("divcurl_solve: end-face fluxes do not balance (imbalance " +
                            std::to_string(out.flux_imbalance) + "), no solution exists");

  out.div_omega_lp = lp_norm(g, divergence(g, omega), p);
  out.tangential_omega_sup = lateral_tangential_sup(g, omega);

  // harmonic lift of the end-face data
  NeumannData psi_data;
  psi_data.x1_lo = &vb_minus;
  psi_data.x1_hi = &vb_plus;
  out.psi = poisson_solve(g, {Bc1D::Neumann, Bc1D::Neumann, Bc1D::Neumann},
                          Field3::Zero(g.size()), psi_data, true);
  VecField3 grad_psi = lift_gradient(g, out.psi, vb_minus, vb_plus);

  // homogeneous-flux part from the vorticity
  VecField3 rhs = curl(g, omega);
  Face2 om3_lo = extract_face_x1(g, omega[2], 0);
  Face2 om3_hi = extract_face_x1(g, omega[2], n - 1);
  Face2 om2_lo = (-extract_face_x1(g, omega[1], 0)).eval();
  Face2 om2_hi = (-extract_face_x1(g, omega[1], n - 1)).eval();

  VecField3 vstar;
  vstar[0] = poisson_solve(g, {Bc1D::Dirichlet, Bc1D::Neumann, Bc1D::Neumann}, rhs[0]);
  {
    NeumannData d2;
    d2.x1_lo = &om3_lo;
    d2.x1_hi = &om3_hi;
    vstar[1] = poisson_solve(g, {Bc1D::Neumann, Bc1D::Dirichlet, Bc1D::Neumann}, rhs[1], d2);
  }
  {
    NeumannData d3;
    d3.x1_lo = &om2_lo;
    d3.x1_hi = &om2_hi;
    vstar[2] = poisson_solve(g, {Bc1D::Neumann, Bc1D::Neumann, Bc1D::Dirichlet}, rhs[2], d3);
  }

  out.v = VecField3{vstar[0] + grad_psi[0], vstar[1] + grad_psi[1], vstar[2] + grad_psi[2]};

  VecField3 cv = curl(g, out.v);
  VecField3 resid{cv[0] - omega[0], cv[1] - omega[1], cv[2] - omega[2]};
  out.curl_residual_abs = lp_norm(g, resid, p);
  const double om_norm = lp_norm(g, omega, p);
  out.curl_residual_rel = om_norm > 1e-14 ? out.curl_residual_abs / om_norm : 0.0;
  out.div_v_lp = lp_norm(g, divergence(g, out.v), p);

  double data = w1p_norm(g, omega, p) + face_w1p_norm(g, vb_minus, p) +
                face_w1p_norm(g, vb_plus, p);
  out.estimate_ratio = data > 1e-14 ? w2p_norm(g, out.v, p) / data : 0.0;
  return out;
}

}  // namespace inflow
