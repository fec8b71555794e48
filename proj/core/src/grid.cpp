#include <phasefield/grid.hpp>

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace phasefield {

std::shared_ptr<const Grid> Grid::make(int dim,
                                       std::array<std::int64_t, 3> cells,
                                       std::array<double, 3> length) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
  Grid g;
  g.dim = dim;
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (cells[a] < 2) throw std::invalid_argument("grid: need at least 2 cells per active axis");
      if (!(length[a] > 0.0)) throw std::invalid_argument("grid: box lengths must be positive");
      g.cells[a] = cells[a];
      g.length[a] = length[a];
      g.spacing[a] = length[a] / static_cast<double>(cells[a]);
    } else {
      g.cells[a] = 1;
      g.length[a] = 1.0;
      g.spacing[a] = 1.0;
    }
  }
  g.cell_count = g.cells[0] * g.cells[1] * g.cells[2];
  g.cell_volume = 1.0;
  for (int a = 0; a < dim; ++a) g.cell_volume *= g.spacing[a];
  return std::make_shared<const Grid>(g);
}

Field Field::zeros(std::shared_ptr<const Grid> g) {
  Field f;
  f.v.assign(static_cast<size_t>(g->cell_count), 0.0);
  f.grid = std::move(g);
  return f;
}

Field Field::constant(std::shared_ptr<const Grid> g, double value) {
  Field f;
  f.v.assign(static_cast<size_t>(g->cell_count), value);
  f.grid = std::move(g);
  return f;
}

Field Field::from_function(std::shared_ptr<const Grid> g,
                           const std::function<double(double, double, double)>& fn) {
  Field f = zeros(g);
  const Grid& gr = *f.grid;
  for (std::int64_t idx = 0; idx < gr.cell_count; ++idx) {
    auto m = gr.multi_index(idx);
    f[idx] = fn(gr.center(0, m[0]), gr.center(1, m[1]), gr.center(2, m[2]));
  }
  return f;
}

bool same_layout(const Field& a, const Field& b) {
  if (a.grid == b.grid) return true;
  if (!a.grid || !b.grid) return false;
  return a.grid->dim == b.grid->dim && a.grid->cells == b.grid->cells &&
         a.grid->length == b.grid->length;
}

void write_field_csv(std::ostream& out, const Field& f) {
  const Grid& g = *f.grid;
  out << "i,j,k,x,y,z,value\n";
  char buf[160];
  for (std::int64_t idx = 0; idx < g.cell_count; ++idx) {
    auto m = g.multi_index(idx);
    std::snprintf(buf, sizeof buf, "%lld,%lld,%lld,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(m[0]), static_cast<long long>(m[1]),
                  static_cast<long long>(m[2]), g.center(0, m[0]), g.center(1, m[1]),
                  g.center(2, m[2]), f[idx]);
    out << buf;
  }
}

}  // namespace phasefield
