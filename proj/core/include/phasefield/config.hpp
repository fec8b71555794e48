#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <phasefield/problem.hpp>
#include <phasefield/solver.hpp>

namespace phasefield {

/// Parameters of the verification studies (convergence levels, sigma sweep,
/// perturbation sizes).
struct StudyParams {
  int levels = 3;
  int dim = 1;
  std::vector<double> sigmas{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  double rho_amp = 0.1;
};

struct OutputParams {
  std::string dir = "out";
  std::vector<double> snapshot_times;
};

/// Everything a tool invocation needs. The problem half defaults to the
/// reference benchmark, so a config file only has to override what differs.
struct Config {
  ProblemSpec problem = default_benchmark();
  SolverConfig solver;
  StudyParams study;
  OutputParams output;
};

/// Config-file or config-value error with its location. line is 1-based
/// (0 when the complaint is not tied to one line); key names the offending
/// entry when there is one.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, std::string key, const std::string& message);
  int line;
  std::string key;
};

/// Parses the INI-style format documented in the README:
/// [problem] / [solver] / [study] / [output] sections, key = value lines,
/// '#' comments, comma-separated lists. Unknown sections or keys, duplicate
/// keys and malformed values raise ParseError with the line number.
Config parse_config(std::istream& in);
Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

/// Canonical rendering: every section, keys in a fixed order, doubles with
/// %.17g, so serialize(parse(serialize(c))) == serialize(c).
std::string serialize_config(const Config& config);

}  // namespace phasefield
