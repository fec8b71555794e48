#include <phasefield/solver.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <phasefield/cg.hpp>
#include <phasefield/operators.hpp>

namespace phasefield {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Evaluates a forcing component at every cell center for a fixed time.
// A null function yields an empty field, which callers treat as zero.
Field eval_forcing(const std::shared_ptr<const Grid>& grid,
                   const std::function<double(double, double, double, double)>& fn, double t) {
  if (!fn) return Field{};
  Field out = Field::zeros(grid);
  std::int64_t idx = 0;
  for (std::int64_t k = 0; k < grid->cells[2]; ++k) {
    const double z = grid->center(2, k);
    for (std::int64_t j = 0; j < grid->cells[1]; ++j) {
      const double y = grid->center(1, j);
      for (std::int64_t i = 0; i < grid->cells[0]; ++i, ++idx) {
        out.v[static_cast<size_t>(idx)] = fn(grid->center(0, i), y, z, t);
      }
    }
  }
  return out;
}

struct CellSolveOutcome {
  double root = 0.0;
  int iterations = 0;
  bool ok = false;
};

// Root of psi(x) = lin_coef * x + tau * f1'(x) - rhs on the potential's open
// domain. lin_coef >= 1 and f1 convex make psi strictly increasing with
// slope >= lin_coef, so the root is simple; safeguarded Newton with a
// bisection fallback never leaves the bracket. For bounded domains the
// bracket is the margin-shrunk interval and a wrong-signed endpoint means
// the root was pushed outside the representable interior: the step is
// rejected (caller halves tau).
CellSolveOutcome solve_cell(const Potential& pot, double lin_coef, double tau, double rhs,
                            double guess, double margin, double tol, int max_iter) {
  CellSolveOutcome out;
  const double dom_lo = pot.domain_lo();
  const double dom_hi = pot.domain_hi();
  const double lo_lim = std::isfinite(dom_lo) ? dom_lo + margin : -kInf;
  const double hi_lim = std::isfinite(dom_hi) ? dom_hi - margin : kInf;

  auto psi = [&](double x) { return lin_coef * x + tau * pot.f1_prime(x) - rhs; };

  double x = std::clamp(guess, std::isfinite(lo_lim) ? lo_lim : guess,
                        std::isfinite(hi_lim) ? hi_lim : guess);
  double fx = psi(x);
  ++out.iterations;
  if (fx == 0.0) {
    out.root = x;
    out.ok = true;
    return out;
  }

  // Bracket from the slope bound: the root lies within |psi(x)| / lin_coef.
  double a, b, fa, fb;
  if (fx > 0.0) {
    b = x;
    fb = fx;
    a = std::max(lo_lim, x - fx / lin_coef);
    fa = psi(a);
    ++out.iterations;
    // Expansion only fires for an unbounded side whose declared split is not
    // actually convex; a clipped bounded side cannot move further.
    for (int e = 0; fa > 0.0 && e < 64; ++e) {
      if (a <= lo_lim) {
        out.root = a;
        return out;  // root below the representable interior
      }
      double width = std::max(1.0, b - a);
      a = std::max(lo_lim, a - width * 2.0);
      fa = psi(a);
      ++out.iterations;
    }
  } else {
    a = x;
    fa = fx;
    b = std::min(hi_lim, x - fx / lin_coef);
    fb = psi(b);
    ++out.iterations;
    for (int e = 0; fb < 0.0 && e < 64; ++e) {
      if (b >= hi_lim) {
        out.root = b;
        return out;
      }
      double width = std::max(1.0, b - a);
      b = std::min(hi_lim, b + width * 2.0);
      fb = psi(b);
      ++out.iterations;
    }
  }
  if (!(fa <= 0.0) || !(fb >= 0.0)) {
    out.root = x;
    return out;
  }

  double xi = std::clamp(x, a, b);
  for (int it = 0; it < max_iter; ++it) {
    double fxi = psi(xi);
    ++out.iterations;
    if (fxi == 0.0) {
      out.root = xi;
      out.ok = true;
      return out;
    }
    if (fxi < 0.0) {
      a = xi;
    } else {
      b = xi;
    }
    double slope = lin_coef + tau * pot.f1_second(xi);
    double xn;
    if (std::isfinite(slope) && slope > 0.0) {
      xn = xi - fxi / slope;
    } else {
      xn = 0.5 * (a + b);
    }
    if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
    const double scale = std::max(1.0, std::abs(xi));
    if (std::abs(xn - xi) <= tol * scale || (b - a) <= tol * scale) {
      out.root = xn;
      out.ok = true;
      return out;
    }
    xi = xn;
  }
  out.root = xi;
  return out;
}

}  // namespace

State State::from_initial_data(const ProblemSpec& spec) {
  State s;
  auto grid = spec.make_grid();
  s.t = 0.0;
  s.mu = spec.mu0.evaluate(grid);
  s.rho = spec.rho0.evaluate(grid);
  s.refresh_u(spec.coupling);
  return s;
}

void State::refresh_u(const Coupling& coupling) {
  u = mu;
  for (size_t i = 0; i < u.v.size(); ++i) {
    u.v[i] = (1.0 + 2.0 * coupling.g(rho.v[i])) * mu.v[i];
  }
}

double energy(const Field& mu, const Field& rho, const Coupling& coupling) {
  double sum = 0.0;
  for (size_t i = 0; i < mu.v.size(); ++i) {
    sum += (1.0 + 2.0 * coupling.g(rho.v[i])) * mu.v[i] * mu.v[i];
  }
  return 0.5 * sum * mu.grid->cell_volume;
}

RhoStepResult step_rho(const State& state, const ProblemSpec& spec, const SolverConfig& cfg,
                       double tau, const Forcing* forcing) {
  const Potential& pot = spec.potential;
  const Coupling& cpl = spec.coupling;
  const auto& grid = state.rho.grid;
  const std::int64_t n = state.rho.size();

  RhoStepResult res;
  res.rho_new = state.rho;

  Field frho = forcing ? eval_forcing(grid, forcing->rho, state.t + tau) : Field{};

  // Explicit part of the update, shared by both the decoupled (sigma = 0)
  // and the diffusive (sigma > 0) branches.
  std::vector<double> rhs(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double r = state.rho[i];
    double val = r - tau * pot.f2_prime(r) + tau * state.mu[i] * cpl.g_prime(r);
    if (!frho.v.empty()) val += tau * frho[i];
    rhs[static_cast<size_t>(i)] = val;
  }

  if (spec.sigma == 0.0) {
    int worst = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      CellSolveOutcome c = solve_cell(pot, 1.0, tau, rhs[static_cast<size_t>(i)], state.rho[i],
                                      cfg.interior_margin, cfg.newton_tol, cfg.newton_max);
      if (!c.ok) return res;
      res.rho_new[i] = c.root;
      worst = std::max(worst, c.iterations);
    }
    res.newton_iterations = worst;
    res.converged = true;
    return res;
  }

  // sigma > 0: backward-Euler diffusion, resolved by nonlinear Gauss-Seidel.
  // Each visit solves the cell's scalar equation with neighbor values frozen
  // at their latest iterates; sweeps run until the largest cell update falls
  // to newton_tol.
  const std::int64_t stride[3] = {1, grid->cells[0], grid->cells[0] * grid->cells[1]};
  double inv_h2[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < grid->dim; ++a) inv_h2[a] = 1.0 / (grid->spacing[a] * grid->spacing[a]);

  int worst_newton = 0;
  for (int sweep = 1; sweep <= cfg.gs_sweep_max; ++sweep) {
    double max_change = 0.0;
    std::int64_t idx = 0;
    for (std::int64_t k = 0; k < grid->cells[2]; ++k) {
      for (std::int64_t j = 0; j < grid->cells[1]; ++j) {
        for (std::int64_t i = 0; i < grid->cells[0]; ++i, ++idx) {
          const std::int64_t m[3] = {i, j, k};
          double diag = 0.0;
          double nbsum = 0.0;
          for (int a = 0; a < grid->dim; ++a) {
            if (grid->cells[a] < 2) continue;
            if (m[a] > 0) {
              diag += inv_h2[a];
              nbsum += inv_h2[a] * res.rho_new[idx - stride[a]];
            }
            if (m[a] < grid->cells[a] - 1) {
              diag += inv_h2[a];
              nbsum += inv_h2[a] * res.rho_new[idx + stride[a]];
            }
          }
          const double lin = 1.0 + tau * spec.sigma * diag;
          const double rhs_total = rhs[static_cast<size_t>(idx)] + tau * spec.sigma * nbsum;
          CellSolveOutcome c = solve_cell(pot, lin, tau, rhs_total, res.rho_new[idx],
                                          cfg.interior_margin, cfg.newton_tol, cfg.newton_max);
          if (!c.ok) {
            res.gs_sweeps = sweep;
            return res;
          }
          max_change = std::max(max_change, std::abs(c.root - res.rho_new[idx]));
          res.rho_new[idx] = c.root;
          worst_newton = std::max(worst_newton, c.iterations);
        }
      }
    }
    if (max_change <= cfg.newton_tol) {
      res.gs_sweeps = sweep;
      res.newton_iterations = worst_newton;
      res.converged = true;
      return res;
    }
  }
  res.gs_sweeps = cfg.gs_sweep_max;
  res.newton_iterations = worst_newton;
  return res;
}

MuStepResult step_mu(const State& state, const Field& rho_new, const ProblemSpec& spec,
                     const SolverConfig& cfg, double tau, const Forcing* forcing) {
  const Coupling& cpl = spec.coupling;
  const auto& grid = state.mu.grid;
  const std::int64_t n = state.mu.size();

  MuStepResult res;
  Field fmu = forcing ? eval_forcing(grid, forcing->mu, state.t + tau) : Field{};

  Field diag = Field::zeros(grid);
  Field rhs = Field::zeros(grid);
  double min_d = kInf;
  for (std::int64_t i = 0; i < n; ++i) {
    const double a = 1.0 + 2.0 * cpl.g(rho_new[i]);
    const double d = a + cpl.g_prime(rho_new[i]) * (rho_new[i] - state.rho[i]);
    min_d = std::min(min_d, d);
    diag[i] = d / tau;
    double r = a * state.mu[i] / tau;
    if (!fmu.v.empty()) r += fmu[i];
    rhs[i] = r;
  }
  res.min_coefficient = min_d;
  if (min_d <= 0.5) {
    // The screened operator stops being an M-matrix and the discrete
    // positivity argument fails; the whole step is redone at tau/2.
    res.need_smaller_tau = true;
    return res;
  }

  res.mu_new = state.mu;  // warm start from the previous time level
  const long max_iter = cfg.linear_max > 0 ? cfg.linear_max : 10 * static_cast<long>(n);
  CgResult cg = cg_solve(diag, rhs, res.mu_new, cfg.linear_tol, max_iter);
  res.linear_iterations = cg.iterations;
  res.converged = cg.converged;
  return res;
}

std::pair<State, StepReport> advance(const State& state, const ProblemSpec& spec,
                                     const SolverConfig& cfg, double& tau,
                                     const Forcing* forcing) {
  StepReport rep;
  double tau_try = tau;
  RhoStepResult rr;
  MuStepResult mr;
  for (;;) {
    SolverError::Kind kind = SolverError::Kind::NonConvergence;
    bool ok = false;
    rr = step_rho(state, spec, cfg, tau_try, forcing);
    if (rr.converged) {
      mr = step_mu(state, rr.rho_new, spec, cfg, tau_try, forcing);
      if (mr.need_smaller_tau) {
        kind = SolverError::Kind::TauUnderflow;
      } else if (mr.converged) {
        ok = true;
      }
    }
    if (ok) break;
    const double next_tau = 0.5 * tau_try;
    if (next_tau < cfg.tau_min) {
      std::ostringstream msg;
      if (kind == SolverError::Kind::TauUnderflow) {
        msg << "coefficient positivity kept failing down to tau = " << tau_try
            << " (min coefficient " << mr.min_coefficient << ") at t = " << state.t;
      } else {
        msg << "nonlinear or linear solve failed to converge down to tau = " << tau_try
            << " at t = " << state.t;
      }
      throw SolverError(kind, state.t, msg.str());
    }
    tau_try = next_tau;
    ++rep.tau_halvings;
  }
  tau = tau_try;
  rep.tau_used = tau_try;
  rep.newton_iterations = rr.newton_iterations;
  rep.gs_sweeps = rr.gs_sweeps;
  rep.linear_iterations = mr.linear_iterations;

  State next;
  next.t = state.t + tau_try;
  next.rho = std::move(rr.rho_new);
  next.mu = std::move(mr.mu_new);
  next.refresh_u(spec.coupling);

  const std::int64_t n = next.mu.size();
  for (std::int64_t i = 0; i < n; ++i) {
    rep.rho_below = std::max(rep.rho_below, spec.rho_min - next.rho[i]);
    rep.rho_above = std::max(rep.rho_above, next.rho[i] - spec.rho_max);
    rep.mu_negative = std::max(rep.mu_negative, -next.mu[i]);
  }

  const double e_old = energy(state.mu, state.rho, spec.coupling);
  rep.energy_value = energy(next.mu, next.rho, spec.coupling);
  rep.dissipation_residual = (rep.energy_value - e_old) / tau_try + grad_sq(next.mu);

  // Conservation defect of the mu-step in its Leibniz (conserved) form:
  //   int (1+2g(rho+)) (mu+ - mu)/tau + int mu+ g'(rho+) (rho+ - rho)/tau
  // minus the integrated forcing. The discrete update satisfies this
  // identity exactly, so the residual measures linear-solver error only.
  double sum_bal = 0.0;
  double sum_scale = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double a = 1.0 + 2.0 * spec.coupling.g(next.rho[i]);
    sum_bal += a * (next.mu[i] - state.mu[i]) +
               next.mu[i] * spec.coupling.g_prime(next.rho[i]) * (next.rho[i] - state.rho[i]);
    sum_scale += a * std::abs(next.mu[i]);
  }
  const double vol = next.mu.grid->cell_volume;
  double mass = sum_bal * vol / tau_try;
  double scale = sum_scale * vol / tau_try;
  if (forcing && forcing->mu) {
    const double fint = integrate(eval_forcing(next.mu.grid, forcing->mu, next.t));
    mass -= fint;
    scale += std::abs(fint);
  }
  rep.mass_residual = mass;
  rep.mass_scale = scale;
  return {std::move(next), rep};
}

namespace {

void fill_bounds(StepReport& rep, const State& s, const ProblemSpec& spec) {
  for (std::int64_t i = 0; i < s.mu.size(); ++i) {
    rep.rho_below = std::max(rep.rho_below, spec.rho_min - s.rho[i]);
    rep.rho_above = std::max(rep.rho_above, s.rho[i] - spec.rho_max);
    rep.mu_negative = std::max(rep.mu_negative, -s.mu[i]);
  }
}

StepDiagnostics make_diagnostics(const State& s, const StepReport& rep, double dtmu_l2) {
  StepDiagnostics d;
  d.t = s.t;
  d.report = rep;
  d.mu_l2 = norm_lp(s.mu, 2.0);
  d.mu_linf = norm_lp(s.mu, kInf);
  d.mu_h1 = norm_h1(s.mu);
  d.rho_l2 = norm_lp(s.rho, 2.0);
  d.rho_linf = norm_lp(s.rho, kInf);
  d.dtmu_l2 = dtmu_l2;
  return d;
}

}  // namespace

RunReport run(const ProblemSpec& spec, const SolverConfig& cfg,
              const std::vector<double>& snapshot_times, const Forcing* forcing,
              const StateObserver& on_state) {
  ValidationReport v = validate(spec);
  if (!v.passed) {
    throw ValidationError("problem failed assumption checks; run validate for details", v);
  }
  if (!spec.potential.has_split()) {
    throw std::invalid_argument("the time stepper needs a declared convex/concave split");
  }
  if (!(cfg.tau_min > 0.0) || !(cfg.tau >= cfg.tau_min)) {
    throw std::invalid_argument("need tau >= tau_min > 0");
  }
  const double T = spec.final_time;
  const double t_eps = 1e-12 * std::max(1.0, T);
  std::vector<double> snaps = snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  for (double ts : snaps) {
    if (ts < 0.0 || ts > T + t_eps) {
      throw std::invalid_argument("snapshot times must lie within [0, final_time]");
    }
  }

  State state = State::from_initial_data(spec);
  RunReport rep;

  {
    StepReport r0;
    r0.energy_value = energy(state.mu, state.rho, spec.coupling);
    fill_bounds(r0, state, spec);
    rep.steps.push_back(make_diagnostics(state, r0, 0.0));
  }
  rep.sup_mu_h1 = norm_h1(state.mu);
  rep.sup_mu_linf = norm_lp(state.mu, kInf);
  if (on_state) on_state(state);

  size_t snap_next = 0;
  auto emit_snapshots = [&]() {
    while (snap_next < snaps.size() && snaps[snap_next] <= state.t + t_eps) {
      rep.snapshots.push_back(Snapshot{snaps[snap_next], state.t, state.mu, state.rho, state.u});
      ++snap_next;
    }
  };
  emit_snapshots();

  double acc_lap = 0.0, acc_grad = 0.0, acc_graddt = 0.0;
  double tau_run = cfg.tau;
  while (state.t < T - t_eps) {
    const double remaining = T - state.t;
    double tau_step = std::min(tau_run, remaining);
    // Absorb a leftover sliver into the final step instead of taking a tiny
    // step whose 1/tau-scaled diagnostics would be pure noise.
    if (remaining - tau_step < 0.1 * tau_run) tau_step = remaining;
    double tau_io = tau_step;
    auto [next, srep] = advance(state, spec, cfg, tau_io, forcing);
    if (srep.tau_halvings > 0) tau_run = std::ldexp(tau_run, -srep.tau_halvings);
    const double tau_used = srep.tau_used;

    Field dtmu = next.mu;
    for (size_t i = 0; i < dtmu.v.size(); ++i) {
      dtmu.v[i] = (next.mu.v[i] - state.mu.v[i]) / tau_used;
    }
    accumulate_spacetime(rep.dtmu_norms, next.t, dtmu, tau_used, 2.0);
    accumulate_spacetime(rep.dtmu_norms, next.t, dtmu, tau_used, 10.0 / 3.0);
    Field lap = laplacian_neumann(next.mu);
    acc_lap += tau_used * dot_l2(lap, lap);
    acc_grad += tau_used * grad_sq(next.mu);
    acc_graddt += tau_used * grad_sq(dtmu);
    rep.sup_mu_h1 = std::max(rep.sup_mu_h1, norm_h1(next.mu));
    rep.sup_mu_linf = std::max(rep.sup_mu_linf, norm_lp(next.mu, kInf));

    if (cfg.record_coefficients) {
      FrozenCoefficients::Record rec;
      rec.t = next.t;
      rec.tau = tau_used;
      rec.a = Field::zeros(next.mu.grid);
      rec.dt_a = Field::zeros(next.mu.grid);
      rec.b = Field::zeros(next.mu.grid);
      Field fmu = forcing ? eval_forcing(next.mu.grid, forcing->mu, next.t) : Field{};
      for (std::int64_t i = 0; i < next.mu.size(); ++i) {
        const double gp = spec.coupling.g_prime(next.rho[i]);
        const double drho = next.rho[i] - state.rho[i];
        rec.a[i] = 1.0 + 2.0 * spec.coupling.g(next.rho[i]);
        rec.dt_a[i] = 2.0 * gp * drho / tau_used;
        double b = next.mu[i] * gp * drho / tau_used;
        if (!fmu.v.empty()) b += fmu[i];
        rec.b[i] = b;
      }
      rep.coefficients.records.push_back(std::move(rec));
    }

    state = std::move(next);
    rep.steps.push_back(make_diagnostics(state, srep, norm_lp(dtmu, 2.0)));
    if (on_state) on_state(state);
    emit_snapshots();
  }

  // Flush any snapshot request T itself rounds past.
  while (snap_next < snaps.size()) {
    rep.snapshots.push_back(Snapshot{snaps[snap_next], state.t, state.mu, state.rho, state.u});
    ++snap_next;
  }

  rep.dtmu_l2_Q = rep.dtmu_norms.spacetime_norm(2.0);
  rep.dtmu_l103_Q = rep.dtmu_norms.spacetime_norm(10.0 / 3.0);
  rep.sup_dtmu_l2 = rep.dtmu_norms.sup_norm(2.0);
  rep.lapmu_l2_Q = std::sqrt(acc_lap);
  rep.gradmu_l2_Q = std::sqrt(acc_grad);
  rep.graddtmu_l2_Q = std::sqrt(acc_graddt);
  rep.final_state = std::move(state);
  return rep;
}

std::vector<Field> solve_frozen_linear(const FrozenCoefficients& coeffs, const Field& mu0,
                                       const SolverConfig& cfg) {
  std::vector<Field> out;
  out.reserve(coeffs.records.size() + 1);
  out.push_back(mu0);

  Field z = mu0;
  for (const auto& rec : coeffs.records) {
    if (!same_layout(rec.a, mu0)) {
      throw std::invalid_argument("frozen coefficients live on a different grid than z0");
    }
    if (!(rec.tau > 0.0)) throw std::invalid_argument("frozen record with nonpositive tau");
    Field diag = Field::zeros(z.grid);
    Field rhs = Field::zeros(z.grid);
    for (std::int64_t i = 0; i < z.size(); ++i) {
      if (rec.a[i] < 1.0 - 1e-12) {
        throw std::invalid_argument("frozen coefficient a must stay >= 1");
      }
      const double d = rec.a[i] + rec.tau * rec.dt_a[i];
      if (!(d > 0.0)) {
        throw std::invalid_argument("frozen step has a nonpositive diagonal");
      }
      diag[i] = d / rec.tau;
      rhs[i] = rec.a[i] * z[i] / rec.tau + rec.b[i];
    }
    const long max_iter = cfg.linear_max > 0 ? cfg.linear_max : 10 * static_cast<long>(z.size());
    CgResult cg = cg_solve(diag, rhs, z, cfg.linear_tol, max_iter);
    if (!cg.converged) {
      throw SolverError(SolverError::Kind::NonConvergence, rec.t,
                        "linear replay failed to converge");
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace phasefield
