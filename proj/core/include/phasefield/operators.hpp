#pragma once

#include <phasefield/grid.hpp>

namespace phasefield {

/// Seven-point (in 3D) second-difference Laplacian with zero-flux boundary
/// treatment via mirror ghosts: the ghost value equals the boundary cell's
/// value, so boundary faces carry exactly zero flux. The resulting operator
/// is symmetric and negative semidefinite, and integrate(laplacian(f)) == 0
/// up to roundoff for every f.
Field laplacian_neumann(const Field& f);

/// Midpoint-rule integral: sum of cell values times cell volume.
double integrate(const Field& f);

/// Volume-weighted inner product, integrate(f*g).
double dot_l2(const Field& f, const Field& g);

/// L^p norm under midpoint quadrature; p = infinity gives max |f|.
/// Throws std::invalid_argument for p < 1.
double norm_lp(const Field& f, double p);

/// Integral of |grad f|^2 using forward differences on interior faces;
/// zero-flux boundary faces contribute nothing. Chosen so that
/// dot_l2(f, laplacian_neumann(f)) == -grad_sq(f) exactly (summation by parts).
double grad_sq(const Field& f);

/// Discrete H^1 norm: sqrt(norm_lp(f,2)^2 + grad_sq(f)).
double norm_h1(const Field& f);

}  // namespace phasefield
