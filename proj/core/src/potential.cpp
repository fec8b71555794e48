#include <phasefield/potential.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <phasefield/detail/poly.hpp>

namespace phasefield {

using detail::poly_first;
using detail::poly_second;
using detail::poly_value;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::numbers::ln2;

// r ln r, continuously extended by 0 at r = 0 (used only for f1 >= 0 shape).
double xlogx(double r) { return r > 0.0 ? r * std::log(r) : 0.0; }
}  // namespace

Potential Potential::logarithmic(double c1, double c2) {
  if (!(c1 > 0.0)) throw std::invalid_argument("logarithmic potential: c1 > 0 required");
  if (!(c2 > 0.0)) throw std::invalid_argument("logarithmic potential: c2 > 0 required");
  if (!(c2 > 2.0 * c1))
    throw std::invalid_argument("logarithmic potential: c2 > 2*c1 violated");
  Potential p;
  p.kind_ = Kind::Logarithmic;
  p.c1_ = c1;
  p.c2_ = c2;
  return p;
}

Potential Potential::quartic() {
  Potential p;
  p.kind_ = Kind::Quartic;
  return p;
}

Potential Potential::custom_polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial potential: empty coefficients");
  Potential p;
  p.kind_ = Kind::CustomPolynomial;
  p.coeffs_ = std::move(coeffs);
  p.has_split_ = false;
  return p;
}

Potential Potential::custom_polynomial(std::vector<double> f1_coeffs,
                                       std::vector<double> f2_coeffs) {
  if (f1_coeffs.empty() && f2_coeffs.empty())
    throw std::invalid_argument("polynomial potential: empty coefficients");
  Potential p;
  p.kind_ = Kind::CustomPolynomial;
  p.f1_coeffs_ = std::move(f1_coeffs);
  p.f2_coeffs_ = std::move(f2_coeffs);
  p.coeffs_.assign(std::max(p.f1_coeffs_.size(), p.f2_coeffs_.size()), 0.0);
  for (size_t i = 0; i < p.f1_coeffs_.size(); ++i) p.coeffs_[i] += p.f1_coeffs_[i];
  for (size_t i = 0; i < p.f2_coeffs_.size(); ++i) p.coeffs_[i] += p.f2_coeffs_[i];
  p.has_split_ = true;
  return p;
}

double Potential::domain_lo() const { return kind_ == Kind::Logarithmic ? 0.0 : -kInf; }
double Potential::domain_hi() const { return kind_ == Kind::Logarithmic ? 1.0 : kInf; }

bool Potential::contains(double r) const { return r > domain_lo() && r < domain_hi(); }

void Potential::check_domain(double r) const {
  if (kind_ == Kind::Logarithmic && !(r > 0.0 && r < 1.0))
    throw std::domain_error("logarithmic potential evaluated outside (0,1)");
}

double Potential::f(double r) const {
  check_domain(r);
  switch (kind_) {
    case Kind::Logarithmic:
      return c1_ * (r * std::log(r) + (1.0 - r) * std::log(1.0 - r)) - c2_ * r * (1.0 - r);
    case Kind::Quartic: {
      double w = r * r - 1.0;
      return 0.25 * w * w;
    }
    case Kind::CustomPolynomial:
      return poly_value(coeffs_, r);
  }
  return 0.0;
}

double Potential::f_prime(double r) const {
  check_domain(r);
  switch (kind_) {
    case Kind::Logarithmic:
      return c1_ * std::log(r / (1.0 - r)) + c2_ * (2.0 * r - 1.0);
    case Kind::Quartic:
      return r * r * r - r;
    case Kind::CustomPolynomial:
      return poly_first(coeffs_, r);
  }
  return 0.0;
}

double Potential::f_second(double r) const {
  check_domain(r);
  switch (kind_) {
    case Kind::Logarithmic:
      return c1_ * (1.0 / r + 1.0 / (1.0 - r)) + 2.0 * c2_;
    case Kind::Quartic:
      return 3.0 * r * r - 1.0;
    case Kind::CustomPolynomial:
      return poly_second(coeffs_, r);
  }
  return 0.0;
}

double Potential::f1(double r) const {
  check_domain(r);
  switch (kind_) {
    case Kind::Logarithmic:
      return c1_ * (xlogx(r) + xlogx(1.0 - r) + kLn2);
    case Kind::Quartic:
      return 0.25 * (r * r * r * r + 1.0);
    case Kind::CustomPolynomial:
      if (!has_split_) throw std::invalid_argument("polynomial potential: no split declared");
      return poly_value(f1_coeffs_, r);
  }
  return 0.0;
}

double Potential::f1_prime(double r) const {
  check_domain(r);
  switch (kind_) {
    case Kind::Logarithmic:
      return c1_ * std::log(r / (1.0 - r));
    case Kind::Quartic:
      return r * r * r;
    case Kind::CustomPolynomial:
      if (!has_split_) throw std::invalid_argument("polynomial potential: no split declared");
      return poly_first(f1_coeffs_, r);
  }
  return 0.0;
}

double Potential::f1_second(double r) const {
  check_domain(r);
  switch (kind_) {
    case Kind::Logarithmic:
      return c1_ * (1.0 / r + 1.0 / (1.0 - r));
    case Kind::Quartic:
      return 3.0 * r * r;
    case Kind::CustomPolynomial:
      if (!has_split_) throw std::invalid_argument("polynomial potential: no split declared");
      return poly_second(f1_coeffs_, r);
  }
  return 0.0;
}

double Potential::f2(double r) const {
  check_domain(r);
  switch (kind_) {
    case Kind::Logarithmic:
      return -c2_ * r * (1.0 - r) - c1_ * kLn2;
    case Kind::Quartic:
      return -0.5 * r * r;
    case Kind::CustomPolynomial:
      if (!has_split_) throw std::invalid_argument("polynomial potential: no split declared");
      return poly_value(f2_coeffs_, r);
  }
  return 0.0;
}

double Potential::f2_prime(double r) const {
  check_domain(r);
  switch (kind_) {
    case Kind::Logarithmic:
      return c2_ * (2.0 * r - 1.0);
    case Kind::Quartic:
      return -r;
    case Kind::CustomPolynomial:
      if (!has_split_) throw std::invalid_argument("polynomial potential: no split declared");
      return poly_first(f2_coeffs_, r);
  }
  return 0.0;
}

double Potential::f2_second(double r) const {
  check_domain(r);
  switch (kind_) {
    case Kind::Logarithmic:
      return 2.0 * c2_;
    case Kind::Quartic:
      return -1.0;
    case Kind::CustomPolynomial:
      if (!has_split_) throw std::invalid_argument("polynomial potential: no split declared");
      return poly_second(f2_coeffs_, r);
  }
  return 0.0;
}

double eval_f(const Potential& p, double r) { return p.f(r); }
double eval_f_prime(const Potential& p, double r) { return p.f_prime(r); }
double eval_f_second(const Potential& p, double r) { return p.f_second(r); }

PotentialSplit split_f(const Potential& p) {
  if (!p.has_split())
    throw std::invalid_argument("split_f: potential has no declared convex/remainder split");
  PotentialSplit s;
  s.f1.value = [p](double r) { return p.f1(r); };
  s.f1.first = [p](double r) { return p.f1_prime(r); };
  s.f1.second = [p](double r) { return p.f1_second(r); };
  s.f2.value = [p](double r) { return p.f2(r); };
  s.f2.first = [p](double r) { return p.f2_prime(r); };
  s.f2.second = [p](double r) { return p.f2_second(r); };
  return s;
}

}  // namespace phasefield
