#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinetic_uq/flux.hpp"
#include "kinetic_uq/sampling.hpp"

namespace kinetic_uq {

/// Configuration errors carry "source:line: message" so callers can print them
/// verbatim and exit.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One key = value entry with the line it came from.
struct IniEntry {
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, IniEntry>> entries;

  const IniEntry* find(const std::string& key) const;
};

/// Parsed INI document. Duplicate sections and duplicate keys within a section
/// are rejected; keys outside any section are rejected.
struct IniDoc {
  std::string source;
  std::vector<IniSection> sections;

  const IniSection* find(const std::string& name) const;
};

IniDoc parse_ini(const std::string& text, const std::string& source);

/// Evaluates a dt rule: +, -, *, /, ^, parentheses, numbers, and the variables
/// supplied in vars (dw, dx, L, sigma2). Errors mention the offending position.
double eval_dt_rule(const std::string& rule,
                    const std::map<std::string, double>& vars);

enum class RunMethod {
  collocation,   // quadrature nodes against an exact expected steady state
  entropy,       // per-node entropy traces, both flux forms
  mc,            // Monte Carlo sweep over sample counts, repeated
  m3c,           // micro-macro control variate plus a matched plain MC run
  fm3c,          // adaptive-sample micro-macro plus a matched fixed-M run
  gpc,           // intrusive chaos expansion, standard and micro-macro variants
  node_sweep,    // nodes x face rules against an exact expected steady state
  phase,         // transport + relaxation splitting with a fluctuation ensemble
};

std::string method_name(RunMethod m);

/// Fully validated scenario description. dt is resolved from the rule text.
struct ScenarioConfig {
  std::string id;
  std::string title;
  std::string model;   // linear_fp | opinion | wealth | swarming
  RunMethod method = RunMethod::collocation;

  double w_min = -1.0, w_max = 1.0;
  int n_cells = 0;

  bool has_space = false;
  double x_min = 0.0, x_max = 0.0;
  int nx_cells = 0;

  double input_a = -1.0, input_b = 1.0;

  std::map<std::string, double> params;  // model coefficients, validated per model

  TimeScheme scheme = TimeScheme::explicit_euler;
  WeightMode weights = WeightMode::quasi_steady;
  FluxForm flux = FluxForm::cc;
  QuadSpec quad;
  std::string dt_rule;
  double dt = 0.0;
  double t_final = 0.0;

  int nodes = 0;
  int reference_nodes = 0;
  int samples = 0;
  int initial_samples = 0;
  int repetitions = 0;
  int chaos_order = 0;
  BankMode bank = BankMode::quadrature;
  int bank_samples = 0;
  int bank_nodes = 0;
  std::vector<int> sample_counts;
  std::vector<int> node_counts;
  std::vector<FaceRule> face_rules;
  std::uint64_t seed = 0;

  std::vector<double> snapshots;
};

/// Parses and validates one scenario file. Throws ConfigError with a
/// line-anchored message on any problem.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source);

/// Text of a scenario compiled into the binary, keyed by its id.
struct BuiltinScenario {
  std::string id;
  std::string text;
};

const std::vector<BuiltinScenario>& builtin_scenarios();

/// Loads a scenario by file path or, failing that, by builtin id.
ScenarioConfig load_scenario(const std::string& path_or_id);

}  // namespace kinetic_uq
