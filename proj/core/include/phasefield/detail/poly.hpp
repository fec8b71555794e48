#pragma once

#include <cstddef>
#include <vector>

namespace phasefield::detail {

// Horner evaluation of a polynomial given by ascending-power coefficients.
inline double poly_value(const std::vector<double>& c, double r) {
  double acc = 0.0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * r + c[i];
  return acc;
}

inline double poly_first(const std::vector<double>& c, double r) {
  double acc = 0.0;
  for (size_t i = c.size(); i-- > 1;) acc = acc * r + static_cast<double>(i) * c[i];
  return acc;
}

inline double poly_second(const std::vector<double>& c, double r) {
  double acc = 0.0;
  for (size_t i = c.size(); i-- > 2;)
    acc = acc * r + static_cast<double>(i) * static_cast<double>(i - 1) * c[i];
  return acc;
}

}  // namespace phasefield::detail
