#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace phasefield {

/// Cell-centered uniform grid over an axis-aligned box in 1, 2 or 3
/// dimensions. Cells are indexed lexicographically with axis 0 (x) fastest.
/// Unused axes are normalized to one cell of unit length so cell_volume is
/// always the product over active axes.
struct Grid {
  int dim = 1;
  std::array<std::int64_t, 3> cells{1, 1, 1};
  std::array<double, 3> length{1.0, 1.0, 1.0};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::int64_t cell_count = 1;
  double cell_volume = 1.0;

  /// Throws std::invalid_argument unless dim in {1,2,3}, every active axis
  /// has >= 2 cells, and every active length is positive.
  static std::shared_ptr<const Grid> make(int dim,
                                          std::array<std::int64_t, 3> cells,
                                          std::array<double, 3> length);

  std::int64_t linear_index(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return i + cells[0] * (j + cells[1] * k);
  }
  std::array<std::int64_t, 3> multi_index(std::int64_t idx) const {
    std::array<std::int64_t, 3> m;
    m[0] = idx % cells[0];
    idx /= cells[0];
    m[1] = idx % cells[1];
    m[2] = idx / cells[1];
    return m;
  }
  /// Cell-center coordinate along one axis.
  double center(int axis, std::int64_t i) const {
    return (static_cast<double>(i) + 0.5) * spacing[axis];
  }
};

/// Value-type scalar field of one double per cell. Copies share the
/// immutable grid description, not the data.
struct Field {
  std::shared_ptr<const Grid> grid;
  std::vector<double> v;

  static Field zeros(std::shared_ptr<const Grid> g);
  static Field constant(std::shared_ptr<const Grid> g, double value);
  static Field from_function(std::shared_ptr<const Grid> g,
                             const std::function<double(double, double, double)>& fn);

  std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }
  double& operator[](std::int64_t i) { return v[static_cast<size_t>(i)]; }
  double operator[](std::int64_t i) const { return v[static_cast<size_t>(i)]; }
};

/// True when both fields live on grids with identical layout.
bool same_layout(const Field& a, const Field& b);

/// Writes "i,j,k,x,y,z,value" rows, one per cell, with a header line.
void write_field_csv(std::ostream& out, const Field& f);

}  // namespace phasefield
