#include <phasefield/cli.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <phasefield/config.hpp>
#include <phasefield/operators.hpp>
#include <phasefield/verify.hpp>

namespace phasefield {

namespace {

namespace fs = std::filesystem;

constexpr const char* kUsage =
    "usage: phasefield <command> [--config FILE] [--quiet] [--threads N]\n"
    "\n"
    "commands:\n"
    "  validate     check the model assumptions and the initial data\n"
    "  run          integrate the system and write per-step diagnostics\n"
    "  mms          manufactured-solution convergence study\n"
    "  regularity   refinement stability of the regularity norms\n"
    "  sweep-sigma  distance to the sigma = 0 limit as sigma vanishes\n"
    "  perturb      continuous dependence on perturbed initial data\n"
    "  frozen       replay through the frozen-coefficient linear problem\n"
    "\n"
    "Without --config the built-in reference problem is used. The\n"
    "PHASEFIELD_OUT environment variable overrides [output] dir.\n"
    "\n"
    "exit codes: 0 success, 1 check failed, 2 usage or config error,\n"
    "            3 solver non-convergence\n";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct CliOptions {
  std::string command;
  std::string config_path;
  bool quiet = false;
  int threads = 1;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f = open_out(path);
  f << text;
}

void write_run_report(std::ostream& os, const RunReport& rep) {
  os << "step,t,tau,tau_halvings,newton_iterations,gs_sweeps,linear_iterations,"
        "energy,dissipation_residual,mass_residual,mass_scale,"
        "rho_below,rho_above,mu_negative,"
        "mu_l2,mu_linf,mu_h1,rho_l2,rho_linf,dtmu_l2\n";
  for (size_t i = 0; i < rep.steps.size(); ++i) {
    const StepDiagnostics& d = rep.steps[i];
    const StepReport& r = d.report;
    os << i << ',' << fmt(d.t) << ',' << fmt(r.tau_used) << ',' << r.tau_halvings << ','
       << r.newton_iterations << ',' << r.gs_sweeps << ',' << r.linear_iterations << ','
       << fmt(r.energy_value) << ',' << fmt(r.dissipation_residual) << ','
       << fmt(r.mass_residual) << ',' << fmt(r.mass_scale) << ',' << fmt(r.rho_below) << ','
       << fmt(r.rho_above) << ',' << fmt(r.mu_negative) << ',' << fmt(d.mu_l2) << ','
       << fmt(d.mu_linf) << ',' << fmt(d.mu_h1) << ',' << fmt(d.rho_l2) << ','
       << fmt(d.rho_linf) << ',' << fmt(d.dtmu_l2) << '\n';
  }
}

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  const Grid& g = *snap.mu.grid;
  os << "i,j,k,x,y,z,mu,rho,u\n";
  for (std::int64_t idx = 0; idx < g.cell_count; ++idx) {
    const auto m = g.multi_index(idx);
    os << m[0] << ',' << m[1] << ',' << m[2] << ',' << fmt(g.center(0, m[0])) << ','
       << fmt(g.center(1, m[1])) << ',' << fmt(g.center(2, m[2])) << ',' << fmt(snap.mu[idx])
       << ',' << fmt(snap.rho[idx]) << ',' << fmt(snap.u[idx]) << '\n';
  }
}

std::string snapshot_name(double requested) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "snapshot_t%g.csv", requested);
  return buf;
}

std::string run_summary(const RunReport& rep) {
  std::ostringstream s;
  const size_t nsteps = rep.steps.size() - 1;
  s << "steps taken: " << nsteps << ", final time " << fmt_short(rep.final_state.t) << "\n";
  const double e0 = rep.steps.front().report.energy_value;
  const double ef = rep.steps.back().report.energy_value;
  double worst_rise = 0.0;
  double max_mass = 0.0, max_scale = 0.0, max_dissip = 0.0;
  double rho_below = 0.0, rho_above = 0.0, mu_negative = 0.0;
  int halvings = 0;
  for (size_t i = 1; i < rep.steps.size(); ++i) {
    const StepReport& r = rep.steps[i].report;
    worst_rise = std::max(worst_rise,
                          r.energy_value - rep.steps[i - 1].report.energy_value);
    max_mass = std::max(max_mass, std::abs(r.mass_residual));
    max_scale = std::max(max_scale, r.mass_scale);
    max_dissip = std::max(max_dissip, std::abs(r.dissipation_residual));
    rho_below = std::max(rho_below, r.rho_below);
    rho_above = std::max(rho_above, r.rho_above);
    mu_negative = std::max(mu_negative, r.mu_negative);
    halvings += r.tau_halvings;
  }
  s << "quadratic energy: " << fmt_short(e0) << " -> " << fmt_short(ef)
    << ", largest single-step increase " << fmt_short(worst_rise) << "\n";
  s << "largest mass-balance residual " << fmt_short(max_mass) << " against scale "
    << fmt_short(max_scale) << "\n";
  s << "largest energy-dissipation residual " << fmt_short(max_dissip) << "\n";
  s << "order parameter stayed in the working interval: "
    << (rho_below == 0.0 && rho_above == 0.0 ? "yes" : "NO") << " (below by "
    << fmt_short(rho_below) << ", above by " << fmt_short(rho_above) << ")\n";
  s << "chemical potential stayed nonnegative: " << (mu_negative == 0.0 ? "yes" : "NO")
    << " (worst " << fmt_short(mu_negative) << ")\n";
  s << "time-step halvings: " << halvings << "\n";
  s << "sup-in-time norms: |mu|_inf " << fmt_short(rep.sup_mu_linf) << ", |mu|_H1 "
    << fmt_short(rep.sup_mu_h1) << ", |dt mu|_L2 " << fmt_short(rep.sup_dtmu_l2) << "\n";
  return s.str();
}

int finish_study(const StudyResult& result, const fs::path& dir, const CliOptions& opt,
                 std::ostream& out) {
  {
    std::ofstream f = open_out(dir / (result.name + ".csv"));
    write_study_csv(f, result);
  }
  std::string text = result.detail;
  text += std::string("verdict: ") + (result.passed ? "pass" : "FAIL") + "\n";
  write_text(dir / "summary.txt", text);
  if (!opt.quiet) {
    out << text;
    out << "wrote " << (dir / (result.name + ".csv")).string() << "\n";
  }
  return result.passed ? 0 : 1;
}

int dispatch(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  Config cfg;
  if (!opt.config_path.empty()) cfg = parse_config_file(opt.config_path);
  if (const char* env_dir = std::getenv("PHASEFIELD_OUT")) {
    if (*env_dir) cfg.output.dir = env_dir;
  }

  if (opt.command == "validate") {
    ValidationReport report = validate(cfg.problem);
    if (!opt.quiet) out << report.to_string();
    return report.passed ? 0 : 1;
  }

  const fs::path dir(cfg.output.dir);
  fs::create_directories(dir);

  if (opt.command == "run") {
    RunReport rep = run(cfg.problem, cfg.solver, cfg.output.snapshot_times);
    {
      std::ofstream f = open_out(dir / "report.csv");
      write_run_report(f, rep);
    }
    for (const Snapshot& snap : rep.snapshots) {
      std::ofstream f = open_out(dir / snapshot_name(snap.requested_time));
      write_snapshot(f, snap);
    }
    const std::string text = run_summary(rep);
    write_text(dir / "summary.txt", text);
    if (!opt.quiet) {
      out << text;
      out << "wrote " << (dir / "report.csv").string() << " and " << rep.snapshots.size()
          << " snapshot(s)\n";
    }
    return 0;
  }
  if (opt.command == "mms") {
    MmsOptions mopt;
    mopt.dim = cfg.study.dim;
    mopt.levels = cfg.study.levels;
    mopt.sigma = cfg.problem.sigma;
    mopt.threads = opt.threads;
    return finish_study(mms_convergence(mopt), dir, opt, out);
  }
  if (opt.command == "regularity") {
    return finish_study(
        regularity_norm_study(cfg.problem, cfg.solver, cfg.study.levels, opt.threads), dir, opt,
        out);
  }
  if (opt.command == "sweep-sigma") {
    if (cfg.study.sigmas.size() < 2) {
      err << "sweep-sigma needs at least 2 values in [study] sigmas\n";
      return 2;
    }
    return finish_study(
        vanishing_diffusion_study(cfg.problem, cfg.solver, cfg.study.sigmas, opt.threads), dir,
        opt, out);
  }
  if (opt.command == "perturb") {
    return finish_study(continuous_dependence_study(cfg.problem, cfg.solver, cfg.study.deltas,
                                                    cfg.study.rho_amp, opt.threads),
                        dir, opt, out);
  }
  if (opt.command == "frozen") {
    return finish_study(frozen_linear_consistency(cfg.problem, cfg.solver), dir, opt, out);
  }
  err << "unknown command '" << opt.command << "'\n" << kUsage;
  return 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliOptions opt;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--help" || a == "-h" || a == "help") {
      out << kUsage;
      return 0;
    }
    if (a == "--quiet") {
      opt.quiet = true;
      continue;
    }
    auto flag_value = [&](const std::string& name, std::string& into) -> bool {
      if (a == name) {
        if (i + 1 >= args.size()) throw std::runtime_error("missing value after " + name);
        into = args[++i];
        return true;
      }
      if (a.rfind(name + "=", 0) == 0) {
        into = a.substr(name.size() + 1);
        return true;
      }
      return false;
    };
    try {
      std::string val;
      if (flag_value("--config", val)) {
        opt.config_path = val;
        continue;
      }
      if (flag_value("--threads", val)) {
        size_t pos = 0;
        int n = 0;
        try {
          n = std::stoi(val, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos != val.size() || n < 1) {
          err << "--threads needs a positive integer, got '" << val << "'\n";
          return 2;
        }
        opt.threads = n;
        continue;
      }
    } catch (const std::runtime_error& e) {
      err << e.what() << "\n" << kUsage;
      return 2;
    }
    if (!a.empty() && a[0] == '-') {
      err << "unknown flag '" << a << "'\n" << kUsage;
      return 2;
    }
    if (!opt.command.empty()) {
      err << "unexpected extra argument '" << a << "'\n" << kUsage;
      return 2;
    }
    opt.command = a;
  }
  if (opt.command.empty()) {
    err << kUsage;
    return 2;
  }

  try {
    return dispatch(opt, out, err);
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "invalid problem: " << e.what() << "\n" << e.report().to_string();
    return 2;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace phasefield
