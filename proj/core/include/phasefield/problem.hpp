#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <phasefield/coupling.hpp>
#include <phasefield/expression.hpp>
#include <phasefield/grid.hpp>
#include <phasefield/potential.hpp>

namespace phasefield {

/// Initial datum: either a closed-form expression over x,y,z or a literal
/// list of per-cell values (lexicographic order, axis 0 fastest).
struct InitialData {
  std::string expression;      // used when values is empty
  std::vector<double> values;  // length must equal the grid's cell count

  static InitialData from_expression(std::string expr);
  static InitialData from_values(std::vector<double> vals);

  Field evaluate(std::shared_ptr<const Grid> grid) const;
};

/// Full description of one initial-boundary value problem:
///
///   (1 + 2 g(rho)) dt_mu + mu g'(rho) dt_rho - lap(mu) = 0
///   dt_rho - sigma lap(rho) + f'(rho) = mu g'(rho)
///
/// on a box with zero-flux boundaries, where sigma = 0 selects the
/// order-parameter ODE limit. rho_min/rho_max delimit the working interval
/// the data and the coefficient assumptions are checked on.
struct ProblemSpec {
  int dimension = 1;
  std::array<std::int64_t, 3> cells{128, 1, 1};
  std::array<double, 3> box_lengths{1.0, 1.0, 1.0};
  double rho_min = 0.1;
  double rho_max = 0.9;
  double sigma = 0.0;
  double final_time = 1.0;
  Potential potential = Potential::quartic();
  Coupling coupling = Coupling::concave_quadratic();
  InitialData mu0;
  InitialData rho0;

  std::shared_ptr<const Grid> make_grid() const;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double worst_point = 0.0;      // sample location (r or x) of the worst margin
  double offending_value = 0.0;  // the value that decided pass/fail there
  std::string detail;
};

struct ValidationReport {
  bool passed = false;
  std::vector<ValidationCheck> checks;
  std::string to_string() const;
};

/// Checks the standing model assumptions on the working interval and the
/// initial data, sampling coefficient functions at 1001 equispaced points
/// (endpoints included):
///   1. interval ordering rho_min < rho_max;
///   2. f and g twice evaluable and finite on [rho_min, rho_max]
///      (for the logarithmic potential this forces the interval into (0,1));
///   3. g >= 0 and g'' <= 0 on the interval;
///   4. endpoint signs f'(rho_min) <= 0 <= g'(rho_min) and
///      g'(rho_max) <= 0 <= f'(rho_max);
///   5. mu0 >= 0 and bounded on the grid;
///   6. rho_min <= rho0 <= rho_max on the grid.
/// Sign comparisons carry 1e-12 slack for roundoff. Never throws on
/// assumption failures; returns the full report.
ValidationReport validate(const ProblemSpec& spec);

/// Raised when a configuration fails assumption checks; carries the report.
class ValidationError : public std::runtime_error {
public:
  ValidationError(std::string message, ValidationReport report);
  const ValidationReport& report() const { return report_; }

private:
  ValidationReport report_;
};

/// Reference problem used across the verification studies: 1D unit box,
/// n = 128, logarithmic potential c1 = 1, c2 = 3, g = r(1-r), working
/// interval [0.1, 0.9], rho0 = 0.5 + 0.3 cos(pi x), mu0 = 1 + 0.5 cos(pi x),
/// sigma = 0, T = 1.
ProblemSpec default_benchmark();

}  // namespace phasefield
