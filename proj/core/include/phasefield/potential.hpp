#pragma once

#include <functional>
#include <vector>

namespace phasefield {

/// A scalar curve together with its first two derivatives.
struct ScalarTriple {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
};

/// Split of a potential into f = f1 + f2 where f1 is convex and nonnegative
/// on the working interval. The time stepper treats f1' implicitly and f2'
/// explicitly, which keeps the per-cell update monotone.
struct PotentialSplit {
  ScalarTriple f1;
  ScalarTriple f2;
};

/// Double-obstacle-free bulk potential f for the order parameter.
///
/// Built-in kinds:
///  - Logarithmic: f(r) = c1 (r ln r + (1-r) ln(1-r)) - c2 r (1-r) on the open
///    domain (0,1). Construction requires c1 > 0, c2 > 0 and c2 > 2 c1.
///    Split: f1 = c1 (r ln r + (1-r) ln(1-r)) + c1 ln 2 (convex, >= 0, = 0 at 1/2),
///    f2 = -c2 r (1-r) - c1 ln 2.
///  - Quartic: f(r) = (r^2 - 1)^2 / 4 on all of R.
///    Split: f1 = (r^4 + 1)/4, f2 = -r^2/2.
///  - CustomPolynomial: coefficients in ascending powers; a split must be
///    declared (two coefficient lists summing to f) before the solver can use it.
class Potential {
public:
  enum class Kind { Logarithmic, Quartic, CustomPolynomial };

  static Potential logarithmic(double c1, double c2);
  static Potential quartic();
  static Potential custom_polynomial(std::vector<double> coeffs);
  static Potential custom_polynomial(std::vector<double> f1_coeffs,
                                     std::vector<double> f2_coeffs);

  Kind kind() const { return kind_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::vector<double>& f1_coeffs() const { return f1_coeffs_; }
  const std::vector<double>& f2_coeffs() const { return f2_coeffs_; }

  /// Open evaluation domain: (0,1) for Logarithmic, all of R otherwise.
  double domain_lo() const;
  double domain_hi() const;
  bool contains(double r) const;

  /// f, f', f''. Throw std::domain_error outside the open domain.
  double f(double r) const;
  double f_prime(double r) const;
  double f_second(double r) const;

  bool has_split() const { return has_split_; }
  double f1(double r) const;
  double f1_prime(double r) const;
  double f1_second(double r) const;
  double f2(double r) const;
  double f2_prime(double r) const;
  double f2_second(double r) const;

private:
  Potential() = default;
  void check_domain(double r) const;

  Kind kind_ = Kind::Quartic;
  double c1_ = 0.0, c2_ = 0.0;
  std::vector<double> coeffs_;     // CustomPolynomial: f
  std::vector<double> f1_coeffs_;  // CustomPolynomial: declared split
  std::vector<double> f2_coeffs_;
  bool has_split_ = true;
};

double eval_f(const Potential& p, double r);
double eval_f_prime(const Potential& p, double r);
double eval_f_second(const Potential& p, double r);

/// Returns the (f1, f2) split as callable triples.
/// Throws std::invalid_argument when no split is declared.
PotentialSplit split_f(const Potential& p);

}  // namespace phasefield
