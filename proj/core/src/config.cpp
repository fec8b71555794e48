#include <phasefield/config.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace phasefield {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& vals) {
  std::string out;
  for (size_t i = 0; i < vals.size(); ++i) {
    if (i) out += ',';
    out += fmt(vals[i]);
  }
  return out;
}

struct Entry {
  int line = 0;
  std::string value;
};

// One raw section: key -> {line, value}. Duplicates were rejected on read.
using Section = std::map<std::string, Entry>;

double parse_double(const std::string& key, const Entry& e) {
  const std::string t = trim(e.value);
  const char* s = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0') {
    throw ParseError(e.line, key, "expected a number for '" + key + "', got '" + t + "'");
  }
  return v;
}

long parse_int(const std::string& key, const Entry& e) {
  const std::string t = trim(e.value);
  const char* s = t.c_str();
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0') {
    throw ParseError(e.line, key, "expected an integer for '" + key + "', got '" + t + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const Entry& e) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) {
      throw ParseError(e.line, key, "empty element in list for '" + key + "'");
    }
    const char* s = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0') {
      throw ParseError(e.line, key, "expected numbers in list for '" + key + "', got '" + t + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ParseError(e.line, key, "empty list for '" + key + "'");
  return out;
}

class Assembler {
public:
  explicit Assembler(Section sec) : sec_(std::move(sec)) {}

  bool has(const std::string& key) const { return sec_.count(key) != 0; }
  const Entry& at(const std::string& key) const { return sec_.find(key)->second; }

  void take_double(const std::string& key, double& out) {
    if (!has(key)) return;
    out = parse_double(key, at(key));
    used_.insert(key);
  }
  void take_int(const std::string& key, int& out) {
    if (!has(key)) return;
    out = static_cast<int>(parse_int(key, at(key)));
    used_.insert(key);
  }
  void take_long(const std::string& key, long& out) {
    if (!has(key)) return;
    out = parse_int(key, at(key));
    used_.insert(key);
  }
  void take_list(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return;
    out = parse_list(key, at(key));
    used_.insert(key);
  }
  void take_string(const std::string& key, std::string& out) {
    if (!has(key)) return;
    out = trim(at(key).value);
    used_.insert(key);
  }
  void mark_used(const std::string& key) { used_.insert(key); }

  // Every stored key must have been consumed by the schema.
  void finish(const std::string& section) const {
    for (const auto& [key, entry] : sec_) {
      if (!used_.count(key)) {
        throw ParseError(entry.line, key,
                         "unknown key '" + key + "' in [" + section + "]");
      }
    }
  }

private:
  Section sec_;
  std::set<std::string> used_;
};

void assemble_problem(Assembler& a, ProblemSpec& p) {
  a.take_int("dimension", p.dimension);
  if (p.dimension < 1 || p.dimension > 3) {
    const int line = a.has("dimension") ? a.at("dimension").line : 0;
    throw ParseError(line, "dimension", "dimension must be 1, 2 or 3");
  }

  if (a.has("cells")) {
    const Entry& e = a.at("cells");
    std::vector<double> vals = parse_list("cells", e);
    a.mark_used("cells");
    if (vals.size() != 1 && vals.size() != static_cast<size_t>(p.dimension)) {
      throw ParseError(e.line, "cells",
                       "cells needs 1 value or one per active axis");
    }
    p.cells = {1, 1, 1};
    for (int ax = 0; ax < p.dimension; ++ax) {
      const double v = vals.size() == 1 ? vals[0] : vals[static_cast<size_t>(ax)];
      if (v < 2 || v != std::floor(v)) {
        throw ParseError(e.line, "cells", "cell counts must be integers >= 2");
      }
      p.cells[ax] = static_cast<std::int64_t>(v);
    }
  } else {
    for (int ax = p.dimension; ax < 3; ++ax) p.cells[ax] = 1;
  }

  if (a.has("box_lengths")) {
    const Entry& e = a.at("box_lengths");
    std::vector<double> vals = parse_list("box_lengths", e);
    a.mark_used("box_lengths");
    if (vals.size() != 1 && vals.size() != static_cast<size_t>(p.dimension)) {
      throw ParseError(e.line, "box_lengths",
                       "box_lengths needs 1 value or one per active axis");
    }
    p.box_lengths = {1.0, 1.0, 1.0};
    for (int ax = 0; ax < p.dimension; ++ax) {
      const double v = vals.size() == 1 ? vals[0] : vals[static_cast<size_t>(ax)];
      if (!(v > 0.0)) throw ParseError(e.line, "box_lengths", "box lengths must be positive");
      p.box_lengths[ax] = v;
    }
  }

  a.take_double("rho_min", p.rho_min);
  a.take_double("rho_max", p.rho_max);
  a.take_double("sigma", p.sigma);
  a.take_double("final_time", p.final_time);

  // Potential block: if any potential key appears, the kind must be named
  // and exactly the keys that kind uses may appear.
  const bool any_pot = a.has("potential") || a.has("potential_c1") || a.has("potential_c2") ||
                       a.has("potential_coeffs") || a.has("potential_f1_coeffs") ||
                       a.has("potential_f2_coeffs");
  if (any_pot) {
    if (!a.has("potential")) {
      throw ParseError(0, "potential",
                       "potential_* keys given without naming 'potential'");
    }
    const Entry& e = a.at("potential");
    const std::string kind = trim(e.value);
    a.mark_used("potential");
    auto forbid = [&](const char* key) {
      if (a.has(key)) {
        throw ParseError(a.at(key).line, key,
                         std::string("'") + key + "' does not apply to potential '" + kind + "'");
      }
    };
    try {
      if (kind == "logarithmic") {
        if (!a.has("potential_c1") || !a.has("potential_c2")) {
          throw ParseError(e.line, "potential",
                           "logarithmic potential needs potential_c1 and potential_c2");
        }
        const double c1 = parse_double("potential_c1", a.at("potential_c1"));
        const double c2 = parse_double("potential_c2", a.at("potential_c2"));
        a.mark_used("potential_c1");
        a.mark_used("potential_c2");
        forbid("potential_coeffs");
        forbid("potential_f1_coeffs");
        forbid("potential_f2_coeffs");
        p.potential = Potential::logarithmic(c1, c2);
      } else if (kind == "quartic") {
        forbid("potential_c1");
        forbid("potential_c2");
        forbid("potential_coeffs");
        forbid("potential_f1_coeffs");
        forbid("potential_f2_coeffs");
        p.potential = Potential::quartic();
      } else if (kind == "custom_polynomial") {
        forbid("potential_c1");
        forbid("potential_c2");
        const bool split = a.has("potential_f1_coeffs") || a.has("potential_f2_coeffs");
        if (split) {
          forbid("potential_coeffs");
          if (!a.has("potential_f1_coeffs") || !a.has("potential_f2_coeffs")) {
            throw ParseError(e.line, "potential",
                             "a split needs both potential_f1_coeffs and potential_f2_coeffs");
          }
          std::vector<double> f1 = parse_list("potential_f1_coeffs", a.at("potential_f1_coeffs"));
          std::vector<double> f2 = parse_list("potential_f2_coeffs", a.at("potential_f2_coeffs"));
          a.mark_used("potential_f1_coeffs");
          a.mark_used("potential_f2_coeffs");
          p.potential = Potential::custom_polynomial(std::move(f1), std::move(f2));
        } else {
          if (!a.has("potential_coeffs")) {
            throw ParseError(e.line, "potential",
                             "custom_polynomial needs potential_coeffs or a f1/f2 split");
          }
          std::vector<double> c = parse_list("potential_coeffs", a.at("potential_coeffs"));
          a.mark_used("potential_coeffs");
          p.potential = Potential::custom_polynomial(std::move(c));
        }
      } else {
        throw ParseError(e.line, "potential", "unknown potential '" + kind + "'");
      }
    } catch (const std::invalid_argument& err) {
      throw ParseError(e.line, "potential", err.what());
    }
  }

  const bool any_cpl = a.has("coupling") || a.has("coupling_coeffs");
  if (any_cpl) {
    if (!a.has("coupling")) {
      throw ParseError(a.at("coupling_coeffs").line, "coupling",
                       "coupling_coeffs given without naming 'coupling'");
    }
    const Entry& e = a.at("coupling");
    const std::string kind = trim(e.value);
    a.mark_used("coupling");
    if (kind == "concave_quadratic") {
      if (a.has("coupling_coeffs")) {
        throw ParseError(a.at("coupling_coeffs").line, "coupling_coeffs",
                         "'coupling_coeffs' does not apply to coupling 'concave_quadratic'");
      }
      p.coupling = Coupling::concave_quadratic();
    } else if (kind == "custom_polynomial") {
      if (!a.has("coupling_coeffs")) {
        throw ParseError(e.line, "coupling", "custom_polynomial needs coupling_coeffs");
      }
      std::vector<double> c = parse_list("coupling_coeffs", a.at("coupling_coeffs"));
      a.mark_used("coupling_coeffs");
      p.coupling = Coupling::custom_polynomial(std::move(c));
    } else {
      throw ParseError(e.line, "coupling", "unknown coupling '" + kind + "'");
    }
  }

  auto take_datum = [&](const char* expr_key, const char* values_key, InitialData& out) {
    if (a.has(expr_key) && a.has(values_key)) {
      throw ParseError(a.at(values_key).line, values_key,
                       std::string("give ") + expr_key + " or " + values_key + ", not both");
    }
    if (a.has(expr_key)) {
      const Entry& e = a.at(expr_key);
      a.mark_used(expr_key);
      try {
        out = InitialData::from_expression(trim(e.value));
      } catch (const std::invalid_argument& err) {
        throw ParseError(e.line, expr_key, err.what());
      }
    } else if (a.has(values_key)) {
      std::vector<double> vals = parse_list(values_key, a.at(values_key));
      a.mark_used(values_key);
      out = InitialData::from_values(std::move(vals));
    }
  };
  take_datum("mu0", "mu0_values", p.mu0);
  take_datum("rho0", "rho0_values", p.rho0);
}

void assemble_solver(Assembler& a, SolverConfig& s) {
  a.take_double("tau", s.tau);
  a.take_double("tau_min", s.tau_min);
  a.take_double("newton_tol", s.newton_tol);
  a.take_int("newton_max", s.newton_max);
  a.take_double("linear_tol", s.linear_tol);
  a.take_long("linear_max", s.linear_max);
  a.take_int("gs_sweep_max", s.gs_sweep_max);
  a.take_double("interior_margin", s.interior_margin);
}

void assemble_study(Assembler& a, StudyParams& s) {
  a.take_int("levels", s.levels);
  a.take_int("dim", s.dim);
  a.take_list("sigmas", s.sigmas);
  a.take_list("deltas", s.deltas);
  a.take_double("rho_amp", s.rho_amp);
}

void assemble_output(Assembler& a, OutputParams& o) {
  a.take_string("dir", o.dir);
  a.take_list("snapshot_times", o.snapshot_times);
}

}  // namespace

ParseError::ParseError(int line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line(line),
      key(std::move(key)) {}

Config parse_config(std::istream& in) {
  std::map<std::string, Section> sections;
  std::string section;  // empty until the first header; keys before it are errors
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(lineno, "", "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section != "problem" && section != "solver" && section != "study" &&
          section != "output") {
        throw ParseError(lineno, section, "unknown section [" + section + "]");
      }
      continue;
    }
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(lineno, "", "expected 'key = value', got '" + t + "'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "", "missing key before '='");
    if (section.empty()) {
      throw ParseError(lineno, key, "key '" + key + "' appears before any [section]");
    }
    auto [it, fresh] = sections[section].emplace(key, Entry{lineno, value});
    if (!fresh) {
      throw ParseError(lineno, key,
                       "duplicate key '" + key + "' in [" + section + "] (first on line " +
                           std::to_string(it->second.line) + ")");
    }
  }

  Config cfg;
  {
    Assembler a(std::move(sections["problem"]));
    assemble_problem(a, cfg.problem);
    a.finish("problem");
  }
  {
    Assembler a(std::move(sections["solver"]));
    assemble_solver(a, cfg.solver);
    a.finish("solver");
  }
  {
    Assembler a(std::move(sections["study"]));
    assemble_study(a, cfg.study);
    a.finish("study");
  }
  {
    Assembler a(std::move(sections["output"]));
    assemble_output(a, cfg.output);
    a.finish("output");
  }
  return cfg;
}

Config parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const Config& config) {
  const ProblemSpec& p = config.problem;
  std::ostringstream out;
  out << "[problem]\n";
  out << "dimension = " << p.dimension << "\n";
  out << "cells = ";
  for (int ax = 0; ax < p.dimension; ++ax) out << (ax ? "," : "") << p.cells[ax];
  out << "\n";
  out << "box_lengths = ";
  for (int ax = 0; ax < p.dimension; ++ax) out << (ax ? "," : "") << fmt(p.box_lengths[ax]);
  out << "\n";
  out << "rho_min = " << fmt(p.rho_min) << "\n";
  out << "rho_max = " << fmt(p.rho_max) << "\n";
  out << "sigma = " << fmt(p.sigma) << "\n";
  out << "final_time = " << fmt(p.final_time) << "\n";
  switch (p.potential.kind()) {
    case Potential::Kind::Logarithmic:
      out << "potential = logarithmic\n";
      out << "potential_c1 = " << fmt(p.potential.c1()) << "\n";
      out << "potential_c2 = " << fmt(p.potential.c2()) << "\n";
      break;
    case Potential::Kind::Quartic:
      out << "potential = quartic\n";
      break;
    case Potential::Kind::CustomPolynomial:
      out << "potential = custom_polynomial\n";
      if (p.potential.has_split()) {
        out << "potential_f1_coeffs = " << join(p.potential.f1_coeffs()) << "\n";
        out << "potential_f2_coeffs = " << join(p.potential.f2_coeffs()) << "\n";
      } else {
        out << "potential_coeffs = " << join(p.potential.coeffs()) << "\n";
      }
      break;
  }
  switch (p.coupling.kind()) {
    case Coupling::Kind::ConcaveQuadratic:
      out << "coupling = concave_quadratic\n";
      break;
    case Coupling::Kind::CustomPolynomial:
      out << "coupling = custom_polynomial\n";
      out << "coupling_coeffs = " << join(p.coupling.coeffs()) << "\n";
      break;
  }
  if (!p.mu0.values.empty()) {
    out << "mu0_values = " << join(p.mu0.values) << "\n";
  } else if (!p.mu0.expression.empty()) {
    out << "mu0 = " << p.mu0.expression << "\n";
  }
  if (!p.rho0.values.empty()) {
    out << "rho0_values = " << join(p.rho0.values) << "\n";
  } else if (!p.rho0.expression.empty()) {
    out << "rho0 = " << p.rho0.expression << "\n";
  }

  const SolverConfig& s = config.solver;
  out << "\n[solver]\n";
  out << "tau = " << fmt(s.tau) << "\n";
  out << "tau_min = " << fmt(s.tau_min) << "\n";
  out << "newton_tol = " << fmt(s.newton_tol) << "\n";
  out << "newton_max = " << s.newton_max << "\n";
  out << "linear_tol = " << fmt(s.linear_tol) << "\n";
  out << "linear_max = " << s.linear_max << "\n";
  out << "gs_sweep_max = " << s.gs_sweep_max << "\n";
  out << "interior_margin = " << fmt(s.interior_margin) << "\n";

  const StudyParams& st = config.study;
  out << "\n[study]\n";
  out << "levels = " << st.levels << "\n";
  out << "dim = " << st.dim << "\n";
  out << "sigmas = " << join(st.sigmas) << "\n";
  out << "deltas = " << join(st.deltas) << "\n";
  out << "rho_amp = " << fmt(st.rho_amp) << "\n";

  const OutputParams& o = config.output;
  out << "\n[output]\n";
  out << "dir = " << o.dir << "\n";
  if (!o.snapshot_times.empty()) {
    out << "snapshot_times = " << join(o.snapshot_times) << "\n";
  }
  return out.str();
}

}  // namespace phasefield
