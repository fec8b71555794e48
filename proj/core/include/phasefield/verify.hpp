#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <phasefield/problem.hpp>
#include <phasefield/solver.hpp>

namespace phasefield {

/// Tabular outcome of one verification study: one row per level / parameter
/// value, plus fitted or aggregated numbers in `summary` and a pass verdict
/// against the study's built-in thresholds.
struct StudyResult {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, double> summary;
  bool passed = false;
  std::string detail;  // one line per checked property, human readable

  double summary_value(const std::string& key) const;  // throws if missing
};

/// Header + rows, %.17g, no summary lines (those go to summary text files).
void write_study_csv(std::ostream& out, const StudyResult& result);

/// Least-squares slope of ln(y) against ln(x); needs >= 2 points and
/// positive data. Used to fit convergence orders.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct MmsOptions {
  int dim = 1;
  int levels = 3;
  double sigma = 0.0;
  double final_time = 0.25;
  std::int64_t base_cells = 16;  // axis 0; refined axes double per level
  double base_tau = 0.25 / 32.0; // quartered per level, so order(tau) = order(h)/2
  int threads = 1;
};

/// Manufactured-solution convergence study. The exact pair
///   mu*(x,t) = e^{-t} (1 + cos(pi x)/2),  rho*(x,t) = 1/2 + cos(pi x) e^{-t}/4
/// on the unit box satisfies the system with computable source terms
/// (logarithmic potential c1 = 1, c2 = 3, g = r(1-r)). Levels refine h and
/// tau jointly with tau proportional to h^2; the fitted slope of the final-time
/// L2 error against h must sit in [1.8, 2.2] and against tau in [0.8, 1.2].
StudyResult mms_convergence(const MmsOptions& opt);

/// Runs `base` at (h, tau), (h/2, tau/4), ... and tabulates the space-time
/// norms a bounded-regularity solution must keep stable:
///   L2(Q) of dt_mu, L2(Q) of lap(mu), sup_t L2 of dt_mu,
///   L2(Q) of grad(dt_mu), L^{10/3}(Q) of dt_mu.
/// Passes when every norm changes by at most 5% between the two finest levels.
StudyResult regularity_norm_study(const ProblemSpec& base, const SolverConfig& cfg,
                                  int levels, int threads = 1);

/// Distance between the diffusive (sigma > 0) and the ODE-limit (sigma = 0)
/// trajectories, d(sigma) = ||rho_s - rho_0||_{L2(Q)} + ||mu_s - mu_0||_{L2(Q)},
/// for each sigma in `sigmas`. Passes when d is strictly decreasing as sigma
/// decreases and d(smallest) <= d(largest)/5.
StudyResult vanishing_diffusion_study(const ProblemSpec& base, const SolverConfig& cfg,
                                      std::vector<double> sigmas, int threads = 1);

/// Perturbs the initial data by delta * cos(pi x / L) on mu0 (amplitude
/// rho_amp * delta on rho0) and measures
///   D(delta) = sup_t ||mu_d - mu||_2 + sup_t ||rho_d - rho||_2
///              + ||grad(mu_d - mu)||_{L2(Q)}.
/// Passes when D(delta)/delta stays within a factor 3 across the deltas
/// (delta = 0 rows must come out exactly zero and are excluded from the
/// ratio).
StudyResult continuous_dependence_study(const ProblemSpec& base, const SolverConfig& cfg,
                                        std::vector<double> deltas, double rho_amp = 0.1,
                                        int threads = 1);

/// Records the coefficient trajectory of a run, replays it through the
/// frozen linear problem, and reports sup over steps of the max-norm gap
/// between the replayed and the original chemical potential. Passes when
/// the gap stays below 1e-9.
StudyResult frozen_linear_consistency(const ProblemSpec& base, const SolverConfig& cfg);

/// Runs fn(i) for i in [0, count) on up to `threads` workers; results must
/// be written to disjoint slots. Exceptions are rethrown on the caller.
void parallel_for_index(std::int64_t count, int threads,
                        const std::function<void(std::int64_t)>& fn);

}  // namespace phasefield
