#include <phasefield/cg.hpp>

#include <cmath>
#include <limits>

#include <phasefield/operators.hpp>

namespace phasefield {

namespace {

// y = diag .* x - lap(x)
void apply(const Field& diag, const Field& x, Field& y) {
  y = laplacian_neumann(x);
  for (size_t i = 0; i < y.v.size(); ++i) y.v[i] = diag.v[i] * x.v[i] - y.v[i];
}

double dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  return s;
}

}  // namespace

CgResult cg_solve(const Field& diag, const Field& rhs, Field& x, double tol, long max_iter) {
  CgResult res;

  Field r = Field::zeros(x.grid);
  apply(diag, x, r);
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = rhs.v[i] - r.v[i];

  const double r0_norm = std::sqrt(dot(r, r));
  const double b_norm = std::sqrt(dot(rhs, rhs));
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * b_norm;
  const double target = std::max(tol * r0_norm, floor);

  if (r0_norm <= floor || r0_norm == 0.0) {
    res.converged = true;
    res.residual = 0.0;
    return res;
  }

  Field p = r;
  Field ap = Field::zeros(x.grid);
  double rr = dot(r, r);

  for (long it = 0; it < max_iter; ++it) {
    apply(diag, p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;  // loss of positive definiteness (roundoff); bail out
    const double alpha = rr / pap;
    for (size_t i = 0; i < x.v.size(); ++i) x.v[i] += alpha * p.v[i];
    for (size_t i = 0; i < r.v.size(); ++i) r.v[i] -= alpha * ap.v[i];
    const double rr_new = dot(r, r);
    res.iterations = it + 1;
    if (std::sqrt(rr_new) <= target) {
      res.converged = true;
      res.residual = std::sqrt(rr_new) / r0_norm;
      return res;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (size_t i = 0; i < p.v.size(); ++i) p.v[i] = r.v[i] + beta * p.v[i];
  }

  res.converged = false;
  res.residual = std::sqrt(rr) / r0_norm;
  return res;
}

}  // namespace phasefield
