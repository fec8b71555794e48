#include <phasefield/operators.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace phasefield {

Field laplacian_neumann(const Field& f) {
  const Grid& g = *f.grid;
  Field out = Field::zeros(f.grid);
  const std::int64_t n0 = g.cells[0], n1 = g.cells[1], n2 = g.cells[2];
  const std::int64_t stride[3] = {1, n0, n0 * n1};
  const double inv_h2[3] = {1.0 / (g.spacing[0] * g.spacing[0]),
                            1.0 / (g.spacing[1] * g.spacing[1]),
                            1.0 / (g.spacing[2] * g.spacing[2])};
  const std::int64_t n[3] = {n0, n1, n2};

  std::int64_t idx = 0;
  for (std::int64_t k = 0; k < n2; ++k) {
    for (std::int64_t j = 0; j < n1; ++j) {
      for (std::int64_t i = 0; i < n0; ++i, ++idx) {
        const std::int64_t m[3] = {i, j, k};
        double acc = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          const double fc = f[idx];
          if (m[a] > 0) acc += (f[idx - stride[a]] - fc) * inv_h2[a];
          if (m[a] < n[a] - 1) acc += (f[idx + stride[a]] - fc) * inv_h2[a];
        }
        out[idx] = acc;
      }
    }
  }
  return out;
}

double integrate(const Field& f) {
  double s = 0.0;
  for (double x : f.v) s += x;
  return s * f.grid->cell_volume;
}

double dot_l2(const Field& f, const Field& g) {
  double s = 0.0;
  for (size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * g.v[i];
  return s * f.grid->cell_volume;
}

double norm_lp(const Field& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::fabs(x));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("norm_lp: p >= 1 required");
  double s = 0.0;
  if (p == 2.0) {
    for (double x : f.v) s += x * x;
  } else {
    for (double x : f.v) s += std::pow(std::fabs(x), p);
  }
  return std::pow(s * f.grid->cell_volume, 1.0 / p);
}

double grad_sq(const Field& f) {
  const Grid& g = *f.grid;
  const std::int64_t n0 = g.cells[0], n1 = g.cells[1], n2 = g.cells[2];
  const std::int64_t stride[3] = {1, n0, n0 * n1};
  const std::int64_t n[3] = {n0, n1, n2};
  double total = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const double inv_h2 = 1.0 / (g.spacing[a] * g.spacing[a]);
    double s = 0.0;
    std::int64_t idx = 0;
    for (std::int64_t k = 0; k < n2; ++k) {
      for (std::int64_t j = 0; j < n1; ++j) {
        for (std::int64_t i = 0; i < n0; ++i, ++idx) {
          const std::int64_t m[3] = {i, j, k};
          if (m[a] < n[a] - 1) {
            const double d = f[idx + stride[a]] - f[idx];
            s += d * d;
          }
        }
      }
    }
    total += s * inv_h2;
  }
  return total * g.cell_volume;
}

double norm_h1(const Field& f) {
  const double l2 = norm_lp(f, 2.0);
  return std::sqrt(l2 * l2 + grad_sq(f));
}

}  // namespace phasefield
