#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <phasefield/problem.hpp>
#include <phasefield/spacetime.hpp>

namespace phasefield {

struct SolverConfig {
  double tau = 1e-3;       // initial time step; adaptivity only ever halves it
  double tau_min = 1e-9;   // halvings below this raise a solver error
  double newton_tol = 1e-12;
  int newton_max = 50;
  double linear_tol = 1e-10;
  long linear_max = 0;     // 0 selects 10x cell count
  int gs_sweep_max = 200;  // nonlinear Gauss-Seidel sweeps for sigma > 0
  double interior_margin = 1e-14;  // keeps scalar iterates inside open potential domains
  bool record_coefficients = true;
};

/// Optional manufactured source terms (x, y, z, t); either entry may be null.
struct Forcing {
  std::function<double(double, double, double, double)> rho;
  std::function<double(double, double, double, double)> mu;
};

/// Trajectory point. u = (1 + 2 g(rho)) mu is derived data, refreshed
/// whenever mu or rho changes.
struct State {
  double t = 0.0;
  Field mu;
  Field rho;
  Field u;

  static State from_initial_data(const ProblemSpec& spec);
  void refresh_u(const Coupling& coupling);
};

/// 0.5 * integral of (1 + 2 g(rho)) mu^2, the Lyapunov functional the
/// zero-flux dynamics dissipate.
double energy(const Field& mu, const Field& rho, const Coupling& coupling);

struct StepReport {
  double tau_used = 0.0;
  int tau_halvings = 0;
  int newton_iterations = 0;  // max over cells within the accepted attempt
  int gs_sweeps = 0;          // 0 when sigma = 0
  long linear_iterations = 0;
  // Bound bookkeeping (positive magnitudes; 0 = no violation). Nothing is
  // ever clamped; these are measurements.
  double rho_below = 0.0;   // max(rho_min - rho, 0) over cells
  double rho_above = 0.0;   // max(rho - rho_max, 0) over cells
  double mu_negative = 0.0; // max(-mu, 0) over cells
  // Discrete identities.
  double energy_value = 0.0;          // E^{n+1}
  double dissipation_residual = 0.0;  // (E^{n+1}-E^n)/tau + grad_sq(mu^{n+1}); O(tau)
  double mass_residual = 0.0;         // conservation defect of the mu-step; solver-tolerance small
  double mass_scale = 0.0;            // magnitude the mass residual should be judged against
};

/// Coefficient trajectory frozen from a completed run, enough to replay the
/// chemical-potential history through the linear solver alone:
///   a = 1 + 2 g(rho^{n+1})          (a >= 1 always)
///   dt_a = 2 g'(rho^{n+1}) (rho^{n+1} - rho^n)/tau
///   b = mu^{n+1} g'(rho^{n+1}) (rho^{n+1} - rho^n)/tau  (+ mu forcing if any)
struct FrozenCoefficients {
  struct Record {
    double t = 0.0;    // time at the end of the step
    double tau = 0.0;  // step size used
    Field a;
    Field dt_a;
    Field b;
  };
  std::vector<Record> records;
};

class SolverError : public std::runtime_error {
public:
  enum class Kind {
    NonConvergence,  // scalar solves or the linear solver failed at tau_min
    TauUnderflow,    // coefficient positivity kept demanding halvings below tau_min
  };

  SolverError(Kind kind, double time, const std::string& message)
      : std::runtime_error(message), kind(kind), time(time) {}

  Kind kind;
  double time;  // simulation time at which the step failed
};

struct RhoStepResult {
  Field rho_new;
  int newton_iterations = 0;
  int gs_sweeps = 0;
  bool converged = false;
};

/// Order-parameter update. Solves, per cell,
///   rho+ + tau f1'(rho+) - tau sigma lap(rho+) = rho - tau f2'(rho) + tau mu g'(rho)
/// For sigma = 0 this is an independent monotone scalar equation per cell
/// (safeguarded Newton with bisection fallback, iterates confined to the
/// open potential domain by interior_margin). For sigma > 0 the implicit
/// diffusion couples cells and nonlinear Gauss-Seidel sweeps are used until
/// the max per-sweep change drops to newton_tol.
RhoStepResult step_rho(const State& state, const ProblemSpec& spec, const SolverConfig& cfg,
                       double tau, const Forcing* forcing = nullptr);

struct MuStepResult {
  Field mu_new;
  long linear_iterations = 0;
  bool converged = false;
  bool need_smaller_tau = false;  // min D <= 1/2: redo the whole step at tau/2
  double min_coefficient = 0.0;   // min over cells of D
};

/// Chemical-potential update. Solves the SPD system
///   [D/tau] mu+ - lap(mu+) = [(1+2g(rho+))/tau] mu^n    (+ forcing)
/// with D = (1+2g(rho+)) + g'(rho+)(rho+ - rho^n). When min D > 1/2 the
/// matrix is an M-matrix, so nonnegative input data keep mu+ >= 0 up to
/// linear-solver error; smaller D demands a smaller tau instead.
MuStepResult step_mu(const State& state, const Field& rho_new, const ProblemSpec& spec,
                     const SolverConfig& cfg, double tau, const Forcing* forcing = nullptr);

/// One accepted time step: rho update then mu update at a shared tau,
/// halving tau and redoing both whenever either half fails. On success tau
/// holds the (possibly halved) step actually used. Throws SolverError when
/// halving would cross cfg.tau_min.
std::pair<State, StepReport> advance(const State& state, const ProblemSpec& spec,
                                     const SolverConfig& cfg, double& tau,
                                     const Forcing* forcing = nullptr);

struct StepDiagnostics {
  double t = 0.0;
  StepReport report;
  double mu_l2 = 0.0, mu_linf = 0.0, mu_h1 = 0.0;
  double rho_l2 = 0.0, rho_linf = 0.0;
  double dtmu_l2 = 0.0;
};

struct Snapshot {
  double requested_time = 0.0;
  double time = 0.0;  // first step time at or past the request
  Field mu, rho, u;
};

struct RunReport {
  std::vector<StepDiagnostics> steps;  // steps[0] holds the initial diagnostics
  State final_state;
  std::vector<Snapshot> snapshots;

  // Space-time norms over Q = Omega x (0,T), discrete time derivative
  // (mu^{n+1}-mu^n)/tau sampled at step ends.
  double dtmu_l2_Q = 0.0;
  double dtmu_l103_Q = 0.0;     // exponent 10/3
  double lapmu_l2_Q = 0.0;
  double gradmu_l2_Q = 0.0;
  double graddtmu_l2_Q = 0.0;
  double sup_dtmu_l2 = 0.0;
  double sup_mu_h1 = 0.0;       // includes the initial state
  double sup_mu_linf = 0.0;

  TrajectoryNorms dtmu_norms;   // per-step records behind the dtmu accumulators
  FrozenCoefficients coefficients;  // empty when recording is disabled
};

/// Called with the initial state and then with every accepted state, in
/// time order; lets callers stream full trajectories without the report
/// having to store them.
using StateObserver = std::function<void(const State&)>;

/// Integrates the system from t = 0 to spec.final_time. Preconditions:
/// validate(spec).passed (throws ValidationError otherwise), a declared
/// potential split, cfg.tau > cfg.tau_min > 0. Snapshot times must lie in
/// [0, T]; each snapshot captures the first state at or past its time.
/// Identical inputs produce bit-identical reports.
RunReport run(const ProblemSpec& spec, const SolverConfig& cfg,
              const std::vector<double>& snapshot_times = {},
              const Forcing* forcing = nullptr,
              const StateObserver& on_state = {});

/// Replays the linear problem a dt_z + dt_a z - lap(z) = b, z(0) = mu0,
/// through the same semi-implicit step and linear solver as the full scheme:
///   [(a + tau dt_a)/tau] z+ - lap(z+) = [a/tau] z^n + b.
/// With coefficients frozen from a run, z reproduces that run's mu
/// trajectory to linear-solver accuracy. Returns the trajectory including
/// z(0). Throws std::invalid_argument when min a < 1 or a record's implied
/// diagonal is not positive.
std::vector<Field> solve_frozen_linear(const FrozenCoefficients& coeffs, const Field& mu0,
                                       const SolverConfig& cfg);

}  // namespace phasefield
