#pragma once

#include <vector>

namespace phasefield {

/// Coupling function g between the order parameter and the chemical
/// potential. The model assumes g >= 0 and g'' <= 0 on the working interval;
/// those are checked by validate(), not at construction.
///
///  - ConcaveQuadratic: g(r) = r (1 - r).
///  - CustomPolynomial: coefficients in ascending powers.
class Coupling {
public:
  enum class Kind { ConcaveQuadratic, CustomPolynomial };

  static Coupling concave_quadratic();
  static Coupling custom_polynomial(std::vector<double> coeffs);

  Kind kind() const { return kind_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  double g(double r) const;
  double g_prime(double r) const;
  double g_second(double r) const;

private:
  Coupling() = default;
  Kind kind_ = Kind::ConcaveQuadratic;
  std::vector<double> coeffs_;
};

double eval_g(const Coupling& c, double r);
double eval_g_prime(const Coupling& c, double r);
double eval_g_second(const Coupling& c, double r);

}  // namespace phasefield
