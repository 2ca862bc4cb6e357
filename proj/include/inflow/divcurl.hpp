#pragma once

#include "inflow/grid3d.hpp"

namespace inflow {

struct DivCurlOptions {
  double flux_balance_rel_tol = 1e-8;
  double p = 4.0;
};

struct DivCurlResult {
  VecField3 v;
  Field3 psi;
  double flux_imbalance = 0.0;
  double div_omega_lp = 0.0;        // precondition report
  double tangential_omega_sup = 0.0;
  double curl_residual_rel = 0.0;   // ||curl v - omega||_p / ||omega||_p
  double curl_residual_abs = 0.0;
  double div_v_lp = 0.0;
  double estimate_ratio = 0.0;      // ||v||_{W^{2,p}} / (||omega||_{W^{1,p}} + face data)
};

/// Velocity from vorticity in the pipe: curl v = omega, div v = 0,
/// v.nu = 0 on the lateral faces, v1 = vb on the end faces.
///
/// The harmonic Neumann lift carries the end-face data; the remaining field
/// solves componentwise Poisson problems -Lap v* = curl omega whose boundary
/// conditions realize the even/odd lateral reflections (normal components
/// odd -> Dirichlet, tangential even -> Neumann) with the end-face Neumann
/// data of the tangential components supplied by the curl constraint.
DivCurlResult divcurl_solve(const Grid3& g, const VecField3& omega, const Face2& vb_minus,
                            const Face2& vb_plus, const DivCurlOptions& opt = {});

}  // namespace inflow
