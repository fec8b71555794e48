#include <phasefield/problem.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace phasefield {

InitialData InitialData::from_expression(std::string expr) {
  Expression::parse(expr);  // fail fast on malformed input
  InitialData d;
  d.expression = std::move(expr);
  return d;
}

InitialData InitialData::from_values(std::vector<double> vals) {
  InitialData d;
  d.values = std::move(vals);
  return d;
}

Field InitialData::evaluate(std::shared_ptr<const Grid> grid) const {
  if (!values.empty()) {
    if (static_cast<std::int64_t>(values.size()) != grid->cell_count)
      throw std::invalid_argument("initial data: literal value count " +
                                  std::to_string(values.size()) + " does not match cell count " +
                                  std::to_string(grid->cell_count));
    Field f;
    f.grid = std::move(grid);
    f.v = values;
    return f;
  }
  Expression e = Expression::parse(expression);
  return Field::from_function(std::move(grid),
                              [&e](double x, double y, double z) { return e(x, y, z); });
}

std::shared_ptr<const Grid> ProblemSpec::make_grid() const {
  return Grid::make(dimension, cells, box_lengths);
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

ValidationError::ValidationError(std::string message, ValidationReport report)
    : std::runtime_error(std::move(message)), report_(std::move(report)) {}

namespace {

constexpr int kSamples = 1001;
constexpr double kSignSlack = 1e-12;

std::string describe(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

}  // namespace

ValidationReport validate(const ProblemSpec& spec) {
  ValidationReport rep;
  const double lo = spec.rho_min, hi = spec.rho_max;

  // 1. Interval ordering.
  {
    ValidationCheck c;
    c.name = "working interval ordered (rho_min < rho_max)";
    c.passed = lo < hi;
    c.worst_point = lo;
    c.offending_value = hi - lo;
    c.detail = "rho_max - rho_min = " + describe(hi - lo);
    rep.checks.push_back(c);
  }

  const bool interval_ok = lo < hi;

  // 2. f and g twice evaluable and finite on the interval.
  {
    ValidationCheck c;
    c.name = "potential and coupling twice evaluable on the working interval";
    c.passed = true;
    if (interval_ok) {
      for (int s = 0; s < kSamples && c.passed; ++s) {
        const double r = lo + (hi - lo) * s / (kSamples - 1);
        try {
          const double vals[6] = {spec.potential.f(r),  spec.potential.f_prime(r),
                                  spec.potential.f_second(r), spec.coupling.g(r),
                                  spec.coupling.g_prime(r),   spec.coupling.g_second(r)};
          for (double v : vals) {
            if (!std::isfinite(v)) {
              c.passed = false;
              c.worst_point = r;
              c.offending_value = v;
              c.detail = "non-finite value at r = " + describe(r);
              break;
            }
          }
        } catch (const std::exception& e) {
          c.passed = false;
          c.worst_point = r;
          c.offending_value = std::numeric_limits<double>::quiet_NaN();
          c.detail = std::string("evaluation failed at r = ") + describe(r) + ": " + e.what();
        }
      }
      if (c.passed) c.detail = "finite f, f', f'', g, g', g'' at 1001 sample points";
    } else {
      c.passed = false;
      c.detail = "skipped: interval not ordered";
    }
    rep.checks.push_back(c);
  }

  const bool evaluable = rep.checks.back().passed;

  // 3. g >= 0 and g'' <= 0 on the interval.
  {
    ValidationCheck c;
    c.name = "coupling nonnegative and concave on the working interval";
    c.passed = evaluable;
    if (evaluable) {
      double min_g = std::numeric_limits<double>::infinity();
      double max_gpp = -std::numeric_limits<double>::infinity();
      double min_g_at = lo, max_gpp_at = lo;
      for (int s = 0; s < kSamples; ++s) {
        const double r = lo + (hi - lo) * s / (kSamples - 1);
        const double gv = spec.coupling.g(r);
        const double gpp = spec.coupling.g_second(r);
        if (gv < min_g) { min_g = gv; min_g_at = r; }
        if (gpp > max_gpp) { max_gpp = gpp; max_gpp_at = r; }
      }
      if (min_g < -kSignSlack) {
        c.passed = false;
        c.worst_point = min_g_at;
        c.offending_value = min_g;
        c.detail = "g < 0: g(" + describe(min_g_at) + ") = " + describe(min_g);
      } else if (max_gpp > kSignSlack) {
        c.passed = false;
        c.worst_point = max_gpp_at;
        c.offending_value = max_gpp;
        c.detail = "g'' > 0: g''(" + describe(max_gpp_at) + ") = " + describe(max_gpp);
      } else {
        c.detail = "min g = " + describe(min_g) + ", max g'' = " + describe(max_gpp);
      }
    } else {
      c.detail = "skipped: coefficients not evaluable";
    }
    rep.checks.push_back(c);
  }

  // 4. Endpoint sign conditions.
  {
    ValidationCheck c;
    c.name = "endpoint sign conditions (f'(rho_min) <= 0 <= g'(rho_min), "
             "g'(rho_max) <= 0 <= f'(rho_max))";
    c.passed = evaluable;
    if (evaluable) {
      const double fp_lo = spec.potential.f_prime(lo);
      const double fp_hi = spec.potential.f_prime(hi);
      const double gp_lo = spec.coupling.g_prime(lo);
      const double gp_hi = spec.coupling.g_prime(hi);
      if (fp_lo > kSignSlack) {
        c.passed = false; c.worst_point = lo; c.offending_value = fp_lo;
        c.detail = "f'(rho_min) = " + describe(fp_lo) + " > 0";
      } else if (gp_lo < -kSignSlack) {
        c.passed = false; c.worst_point = lo; c.offending_value = gp_lo;
        c.detail = "g'(rho_min) = " + describe(gp_lo) + " < 0";
      } else if (gp_hi > kSignSlack) {
        c.passed = false; c.worst_point = hi; c.offending_value = gp_hi;
        c.detail = "g'(rho_max) = " + describe(gp_hi) + " > 0";
      } else if (fp_hi < -kSignSlack) {
        c.passed = false; c.worst_point = hi; c.offending_value = fp_hi;
        c.detail = "f'(rho_max) = " + describe(fp_hi) + " < 0";
      } else {
        c.detail = "f'(rho_min) = " + describe(fp_lo) + ", f'(rho_max) = " + describe(fp_hi) +
                   ", g'(rho_min) = " + describe(gp_lo) + ", g'(rho_max) = " + describe(gp_hi);
      }
    } else {
      c.detail = "skipped: coefficients not evaluable";
    }
    rep.checks.push_back(c);
  }

  // 5 and 6. Initial data on the grid.
  Field mu0, rho0;
  bool data_ok = true;
  std::string data_error;
  try {
    auto grid = spec.make_grid();
    mu0 = spec.mu0.evaluate(grid);
    rho0 = spec.rho0.evaluate(grid);
  } catch (const std::exception& e) {
    data_ok = false;
    data_error = e.what();
  }

  {
    ValidationCheck c;
    c.name = "initial chemical potential nonnegative and bounded";
    if (data_ok) {
      double mn = std::numeric_limits<double>::infinity(), mx = -mn;
      std::int64_t mn_at = 0;
      bool finite = true;
      for (std::int64_t i = 0; i < mu0.size(); ++i) {
        if (!std::isfinite(mu0[i])) { finite = false; mn_at = i; break; }
        if (mu0[i] < mn) { mn = mu0[i]; mn_at = i; }
        mx = std::max(mx, mu0[i]);
      }
      if (!finite) {
        c.passed = false;
        c.offending_value = std::numeric_limits<double>::quiet_NaN();
        c.detail = "non-finite mu0 at cell " + std::to_string(mn_at);
      } else if (mn < -kSignSlack) {
        c.passed = false;
        c.worst_point = mu0.grid->center(0, mu0.grid->multi_index(mn_at)[0]);
        c.offending_value = mn;
        c.detail = "min mu0 = " + describe(mn);
      } else {
        c.passed = true;
        c.detail = "mu0 in [" + describe(mn) + ", " + describe(mx) + "]";
      }
    } else {
      c.passed = false;
      c.detail = "initial data not evaluable: " + data_error;
    }
    rep.checks.push_back(c);
  }

  {
    ValidationCheck c;
    c.name = "initial order parameter within the working interval";
    if (data_ok && interval_ok) {
      double mn = std::numeric_limits<double>::infinity(), mx = -mn;
      std::int64_t mn_at = 0, mx_at = 0;
      for (std::int64_t i = 0; i < rho0.size(); ++i) {
        if (rho0[i] < mn) { mn = rho0[i]; mn_at = i; }
        if (rho0[i] > mx) { mx = rho0[i]; mx_at = i; }
      }
      if (!(mn >= lo - kSignSlack)) {
        c.passed = false;
        c.worst_point = rho0.grid->center(0, rho0.grid->multi_index(mn_at)[0]);
        c.offending_value = mn;
        c.detail = "min rho0 = " + describe(mn) + " < rho_min";
      } else if (!(mx <= hi + kSignSlack)) {
        c.passed = false;
        c.worst_point = rho0.grid->center(0, rho0.grid->multi_index(mx_at)[0]);
        c.offending_value = mx;
        c.detail = "max rho0 = " + describe(mx) + " > rho_max";
      } else {
        c.passed = true;
        c.detail = "rho0 in [" + describe(mn) + ", " + describe(mx) + "]";
      }
    } else {
      c.passed = false;
      c.detail = data_ok ? "skipped: interval not ordered"
                         : "initial data not evaluable: " + data_error;
    }
    rep.checks.push_back(c);
  }

  rep.passed = true;
  for (const auto& c : rep.checks) rep.passed = rep.passed && c.passed;
  return rep;
}

ProblemSpec default_benchmark() {
  ProblemSpec s;
  s.dimension = 1;
  s.cells = {128, 1, 1};
  s.box_lengths = {1.0, 1.0, 1.0};
  s.rho_min = 0.1;
  s.rho_max = 0.9;
  s.sigma = 0.0;
  s.final_time = 1.0;
  s.potential = Potential::logarithmic(1.0, 3.0);
  s.coupling = Coupling::concave_quadratic();
  s.mu0 = InitialData::from_expression("1 + 0.5*cos(pi*x)");
  s.rho0 = InitialData::from_expression("0.5 + 0.3*cos(pi*x)");
  return s;
}

}  // namespace phasefield
