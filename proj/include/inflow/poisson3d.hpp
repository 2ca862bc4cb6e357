#pragma once

#include "inflow/grid3d.hpp"

namespace inflow {

enum class Bc1D { Dirichlet, Neumann };

struct PoissonBc {
  Bc1D x1 = Bc1D::Dirichlet;
  Bc1D x2 = Bc1D::Dirichlet;
  Bc1D x3 = Bc1D::Dirichlet;
};

/// Optional inhomogeneous Neumann data (outward derivative along the axis at
/// the low/high face). Layout of each face sample: x1 faces -> (j,k),
/// x2 faces -> (i,k), x3 faces -> (i,j).
struct NeumannData {
  const Face2* x1_lo = nullptr;
  const Face2* x1_hi = nullptr;
  const Face2* x2_lo = nullptr;
  const Face2* x2_hi = nullptr;
  const Face2* x3_lo = nullptr;
  const Face2* x3_hi = nullptr;
};

/// Solves -Laplace(u) = rhs with second-order differences. Dirichlet faces
/// impose u = 0; Neumann faces impose the given axis derivative (zero when
/// absent) through ghost reflection. Eigen-transforms in x2 and x3
/// diagonalize the discrete operator exactly; each mode reduces to a
/// tridiagonal solve in x1. The all-Neumann problem is gauged to zero mean
/// with the right-hand side projected onto the solvable range.
Field3 poisson_solve(const Grid3& g, PoissonBc bc, Field3 rhs, const NeumannData& data = {},
                     bool zero_mean = false);

}  // namespace inflow
