#include <phasefield/coupling.hpp>

#include <stdexcept>

#include <phasefield/detail/poly.hpp>

namespace phasefield {

Coupling Coupling::concave_quadratic() {
  Coupling c;
  c.kind_ = Kind::ConcaveQuadratic;
  return c;
}

Coupling Coupling::custom_polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial coupling: empty coefficients");
  Coupling c;
  c.kind_ = Kind::CustomPolynomial;
  c.coeffs_ = std::move(coeffs);
  return c;
}

double Coupling::g(double r) const {
  return kind_ == Kind::ConcaveQuadratic ? r * (1.0 - r) : detail::poly_value(coeffs_, r);
}

double Coupling::g_prime(double r) const {
  return kind_ == Kind::ConcaveQuadratic ? 1.0 - 2.0 * r : detail::poly_first(coeffs_, r);
}

double Coupling::g_second(double r) const {
  return kind_ == Kind::ConcaveQuadratic ? -2.0 : detail::poly_second(coeffs_, r);
}

double eval_g(const Coupling& c, double r) { return c.g(r); }
double eval_g_prime(const Coupling& c, double r) { return c.g_prime(r); }
double eval_g_second(const Coupling& c, double r) { return c.g_second(r); }

}  // namespace phasefield
