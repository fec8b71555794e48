#pragma once

#include <phasefield/grid.hpp>

namespace phasefield {

struct CgResult {
  long iterations = 0;
  double residual = 0.0;  // final ||r|| relative to the initial residual
  bool converged = false;
};

/// Conjugate-gradient solve of (diag .* x) - lap_neumann(x) = rhs for SPD
/// diag > 0 (screened Neumann Laplacian; matrix-free stencil apply).
///
/// x carries the initial guess on entry and the solution on exit. Iteration
/// stops when ||r|| <= tol * ||r0|| (warm starts make the initial residual
/// the natural scale), with a floor of 100*eps*||rhs|| against unreachable
/// targets; a zero rhs with a zero guess returns immediately.
CgResult cg_solve(const Field& diag, const Field& rhs, Field& x, double tol, long max_iter);

}  // namespace phasefield
