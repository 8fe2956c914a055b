#include "kinetic_uq/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "kinetic_uq/scenarios_builtin.hpp"

namespace kinetic_uq {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& msg) {
  std::ostringstream os;
  os << source << ":" << line << ": " << msg;
  throw ConfigError(os.str());
}

}  // namespace

const IniEntry* IniSection::find(const std::string& key) const {
  for (const auto& kv : entries)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

const IniSection* IniDoc::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

IniDoc parse_ini(const std::string& text, const std::string& source) {
  IniDoc doc;
  doc.source = source;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  IniSection* cur = nullptr;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_at(source, line, "unterminated section header");
      std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) fail_at(source, line, "empty section name");
      if (doc.find(name)) fail_at(source, line, "duplicate section [" + name + "]");
      doc.sections.push_back(IniSection{name, line, {}});
      cur = &doc.sections.back();
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail_at(source, line, "expected '[section]' or 'key = value'");
    if (!cur) fail_at(source, line, "key outside of any section");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail_at(source, line, "empty key");
    if (value.empty()) fail_at(source, line, "key '" + key + "' has no value");
    if (cur->find(key))
      fail_at(source, line, "duplicate key '" + key + "' in [" + cur->name + "]");
    cur->entries.emplace_back(key, IniEntry{value, line});
  }
  return doc;
}

// ---- dt rule expressions ----

namespace {

struct RuleParser {
  const std::string& text;
  const std::map<std::string, double>& vars;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "dt rule '" << text << "': " << msg << " at position " << pos + 1;
    throw ConfigError(os.str());
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  double parse_expr() {
    double v = parse_term();
    for (;;) {
      if (eat('+')) v += parse_term();
      else if (eat('-')) v -= parse_term();
      else return v;
    }
  }

  double parse_term() {
    double v = parse_unary();
    for (;;) {
      if (eat('*')) v *= parse_unary();
      else if (eat('/')) {
        double d = parse_unary();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else return v;
    }
  }

  double parse_unary() {
    if (eat('-')) return -parse_unary();
    return parse_power();
  }

  double parse_power() {
    double b = parse_base();
    if (eat('^')) return std::pow(b, parse_unary());
    return b;
  }

  double parse_base() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      double v = parse_expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      double v = std::strtod(text.c_str() + pos, &end);
      if (end == text.c_str() + pos) fail("malformed number");
      pos = static_cast<size_t>(end - text.c_str());
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      std::string name = text.substr(start, pos - start);
      auto it = vars.find(name);
      if (it == vars.end()) {
        pos = start;
        std::string known;
        for (const auto& kv : vars) known += (known.empty() ? "" : ", ") + kv.first;
        fail("unknown variable '" + name + "' (have " + known + ")");
      }
      return it->second;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

double eval_dt_rule(const std::string& rule, const std::map<std::string, double>& vars) {
  RuleParser p{rule, vars};
  double v = p.parse_expr();
  p.skip_ws();
  if (p.pos != rule.size()) p.fail("trailing input");
  return v;
}

// ---- typed section access ----

namespace {

struct SectionReader {
  const std::string& source;
  const IniSection* sec = nullptr;
  int anchor_line = 0;  // used when the section itself is missing
  std::set<std::string> seen;

  [[noreturn]] void fail(int line, const std::string& msg) const {
    fail_at(source, line, msg);
  }

  const IniEntry& require(const std::string& key) {
    const IniEntry* e = sec ? sec->find(key) : nullptr;
    if (!e)
      fail(sec ? sec->line : anchor_line,
           "missing key '" + key + "' in [" + (sec ? sec->name : "?") + "]");
    seen.insert(key);
    return *e;
  }

  const IniEntry* optional(const std::string& key) {
    const IniEntry* e = sec ? sec->find(key) : nullptr;
    if (e) seen.insert(key);
    return e;
  }

  std::string get_string(const std::string& key) { return require(key).value; }

  double parse_double(const std::string& key, const IniEntry& e) const {
    char* end = nullptr;
    double v = std::strtod(e.value.c_str(), &end);
    if (end != e.value.c_str() + e.value.size() || e.value.empty())
      fail(e.line, "key '" + key + "' expects a number, got '" + e.value + "'");
    return v;
  }

  double get_double(const std::string& key) {
    const IniEntry& e = require(key);
    return parse_double(key, e);
  }

  int get_int(const std::string& key) {
    const IniEntry& e = require(key);
    double v = parse_double(key, e);
    if (v != std::floor(v) || std::fabs(v) > 2e9)
      fail(e.line, "key '" + key + "' expects an integer, got '" + e.value + "'");
    return static_cast<int>(v);
  }

  std::uint64_t get_uint64(const std::string& key) {
    const IniEntry& e = require(key);
    for (char c : e.value)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail(e.line, "key '" + key + "' expects a nonnegative integer, got '" + e.value + "'");
    return std::strtoull(e.value.c_str(), nullptr, 10);
  }

  std::vector<std::string> split_list(const IniEntry& e, const std::string& key) const {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(e.value);
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(e.line, "empty item in list '" + key + "'");
      out.push_back(item);
    }
    if (out.empty()) fail(e.line, "list '" + key + "' is empty");
    return out;
  }

  std::vector<int> get_int_list(const std::string& key) {
    const IniEntry& e = require(key);
    std::vector<int> out;
    for (const std::string& item : split_list(e, key)) {
      IniEntry fake{item, e.line};
      double v = parse_double(key, fake);
      if (v != std::floor(v))
        fail(e.line, "list '" + key + "' expects integers, got '" + item + "'");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  std::vector<double> get_double_list(const std::string& key) {
    const IniEntry& e = require(key);
    std::vector<double> out;
    for (const std::string& item : split_list(e, key)) {
      IniEntry fake{item, e.line};
      out.push_back(parse_double(key, fake));
    }
    return out;
  }

  std::vector<std::string> get_string_list(const std::string& key) {
    const IniEntry& e = require(key);
    return split_list(e, key);
  }

  void finish() const {
    if (!sec) return;
    for (const auto& kv : sec->entries)
      if (!seen.count(kv.first))
        fail(kv.second.line, "unknown key '" + kv.first + "' in [" + sec->name + "]");
  }
};

template <typename T>
T parse_enum(const std::string& source, const IniEntry& e, const std::string& key,
             const std::vector<std::pair<std::string, T>>& table) {
  for (const auto& kv : table)
    if (kv.first == e.value) return kv.second;
  std::string known;
  for (const auto& kv : table) known += (known.empty() ? "" : ", ") + kv.first;
  fail_at(source, e.line, "key '" + key + "' must be one of {" + known + "}, got '" +
                              e.value + "'");
}

const std::vector<std::pair<std::string, FaceRule>>& face_rule_table() {
  static const std::vector<std::pair<std::string, FaceRule>> t = {
      {"midpoint", FaceRule::midpoint}, {"open_nc2", FaceRule::open_nc2},
      {"open_nc4", FaceRule::open_nc4}, {"open_nc6", FaceRule::open_nc6},
      {"gauss", FaceRule::gauss},
  };
  return t;
}

}  // namespace

std::string method_name(RunMethod m) {
  switch (m) {
    case RunMethod::collocation: return "collocation";
    case RunMethod::entropy: return "entropy";
    case RunMethod::mc: return "mc";
    case RunMethod::m3c: return "m3c";
    case RunMethod::fm3c: return "fm3c";
    case RunMethod::gpc: return "gpc";
    case RunMethod::node_sweep: return "node_sweep";
    case RunMethod::phase: return "phase";
  }
  return "?";
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
  const IniDoc doc = parse_ini(text, source);
  ScenarioConfig c;

  auto reader = [&](const std::string& name, bool required) {
    SectionReader r{doc.source, doc.find(name), 1, {}};
    if (required && !r.sec)
      throw ConfigError(doc.source + ":1: missing section [" + name + "]");
    return r;
  };

  SectionReader sc = reader("scenario", true);
  c.id = sc.get_string("id");
  for (char ch : c.id)
    if (!std::islower(static_cast<unsigned char>(ch)) &&
        !std::isdigit(static_cast<unsigned char>(ch)) && ch != '_')
      sc.fail(sc.require("id").line, "id must match [a-z0-9_]+");
  c.title = sc.get_string("title");
  c.model = sc.get_string("model");
  static const std::set<std::string> models = {"linear_fp", "opinion", "wealth",
                                               "swarming"};
  if (!models.count(c.model))
    sc.fail(sc.require("model").line,
            "model must be one of {linear_fp, opinion, wealth, swarming}, got '" +
                c.model + "'");
  c.method = parse_enum<RunMethod>(
      doc.source, sc.require("method"), "method",
      {{"collocation", RunMethod::collocation},
       {"entropy", RunMethod::entropy},
       {"mc", RunMethod::mc},
       {"m3c", RunMethod::m3c},
       {"fm3c", RunMethod::fm3c},
       {"gpc", RunMethod::gpc},
       {"node_sweep", RunMethod::node_sweep},
       {"phase", RunMethod::phase}});
  sc.finish();

  SectionReader gr = reader("grid", true);
  c.w_min = gr.get_double("w_min");
  c.w_max = gr.get_double("w_max");
  c.n_cells = gr.get_int("n_cells");
  if (!(c.w_max > c.w_min)) gr.fail(gr.sec->line, "w_max must exceed w_min");
  if (c.n_cells < 2) gr.fail(gr.require("n_cells").line, "n_cells must be at least 2");
  gr.finish();

  const IniSection* space = doc.find("space");
  if (c.method == RunMethod::phase && !space)
    throw ConfigError(doc.source + ":1: method = phase requires a [space] section");
  if (space && c.method != RunMethod::phase)
    fail_at(doc.source, space->line, "section [space] is only valid for method = phase");
  if (space) {
    SectionReader sp = reader("space", true);
    c.has_space = true;
    c.x_min = sp.get_double("x_min");
    c.x_max = sp.get_double("x_max");
    c.nx_cells = sp.get_int("n_cells");
    if (!(c.x_max > c.x_min)) sp.fail(sp.sec->line, "x_max must exceed x_min");
    if (c.nx_cells < 8) sp.fail(sp.require("n_cells").line, "n_cells must be at least 8");
    sp.finish();
  }

  SectionReader in = reader("input", true);
  c.input_a = in.get_double("a");
  c.input_b = in.get_double("b");
  if (!(c.input_b > c.input_a)) in.fail(in.sec->line, "b must exceed a");
  in.finish();

  SectionReader mo = reader("model", true);
  static const std::map<std::string, std::vector<std::string>> model_keys = {
      {"linear_fp", {"u", "mixture_c", "sigma2_base", "sigma2_slope"}},
      {"opinion", {"p_base", "p_slope", "sigma2", "datum_c"}},
      {"wealth", {"sigma2_base", "sigma2_slope", "datum_c", "datum_mean"}},
      {"swarming", {"alpha", "d_base", "d_slope", "x_sigma", "w_mu", "w_sigma2"}},
  };
  for (const std::string& key : model_keys.at(c.model))
    c.params[key] = mo.get_double(key);
  mo.finish();

  SectionReader so = reader("solver", true);
  c.scheme = parse_enum<TimeScheme>(doc.source, so.require("scheme"), "scheme",
                                    {{"explicit_euler", TimeScheme::explicit_euler},
                                     {"ssp_rk2", TimeScheme::ssp_rk2},
                                     {"ssp_rk3", TimeScheme::ssp_rk3},
                                     {"semi_implicit", TimeScheme::semi_implicit}});
  c.weights = parse_enum<WeightMode>(doc.source, so.require("weights"), "weights",
                                     {{"quasi_steady", WeightMode::quasi_steady},
                                      {"exact", WeightMode::exact}});
  c.flux = parse_enum<FluxForm>(doc.source, so.require("flux"), "flux",
                                {{"cc", FluxForm::cc}, {"entropic", FluxForm::entropic}});
  c.quad.rule = parse_enum<FaceRule>(doc.source, so.require("face_rule"), "face_rule",
                                     face_rule_table());
  if (const IniEntry* gp = so.optional("gauss_points")) {
    c.quad.gauss_points = so.get_int("gauss_points");
    if (c.quad.gauss_points < 1) so.fail(gp->line, "gauss_points must be positive");
  }
  c.dt_rule = so.get_string("dt");
  c.t_final = so.get_double("t_final");
  if (!(c.t_final > 0.0))
    so.fail(so.require("t_final").line, "t_final must be positive");

  // dt rules may reference the mesh widths, the domain length, and the
  // nominal diffusion scale of the model at theta = 0.
  std::map<std::string, double> vars;
  vars["L"] = c.w_max - c.w_min;
  vars["dw"] = (c.w_max - c.w_min) / c.n_cells;
  if (c.has_space) vars["dx"] = (c.x_max - c.x_min) / c.nx_cells;
  if (c.model == "linear_fp" || c.model == "wealth")
    vars["sigma2"] = c.params.at("sigma2_base");
  else if (c.model == "opinion")
    vars["sigma2"] = c.params.at("sigma2");
  else
    vars["sigma2"] = c.params.at("d_base");
  const IniEntry& dt_entry = so.require("dt");
  try {
    c.dt = eval_dt_rule(c.dt_rule, vars);
  } catch (const ConfigError& e) {
    so.fail(dt_entry.line, e.what());
  }
  if (!(c.dt > 0.0) || !std::isfinite(c.dt))
    so.fail(dt_entry.line, "dt rule evaluates to a nonpositive value");
  so.finish();

  SectionReader uq = reader("uq", true);
  auto positive = [&](const std::string& key) {
    int v = uq.get_int(key);
    if (v < 1) uq.fail(uq.require(key).line, "key '" + key + "' must be positive");
    return v;
  };
  switch (c.method) {
    case RunMethod::collocation:
      c.nodes = positive("nodes");
      c.reference_nodes = positive("reference_nodes");
      break;
    case RunMethod::entropy:
      c.nodes = positive("nodes");
      break;
    case RunMethod::mc: {
      c.sample_counts = uq.get_int_list("sample_counts");
      const IniEntry& e = uq.require("sample_counts");
      for (size_t i = 0; i < c.sample_counts.size(); ++i) {
        if (c.sample_counts[i] < 1) uq.fail(e.line, "sample counts must be positive");
        if (i && c.sample_counts[i] <= c.sample_counts[i - 1])
          uq.fail(e.line, "sample counts must be strictly increasing");
      }
      c.repetitions = positive("repetitions");
      c.reference_nodes = positive("reference_nodes");
      c.seed = uq.get_uint64("seed");
      break;
    }
    case RunMethod::m3c:
      c.samples = positive("samples");
      c.repetitions = positive("repetitions");
      c.bank = parse_enum<BankMode>(doc.source, uq.require("bank"), "bank",
                                    {{"sample", BankMode::sample},
                                     {"quadrature", BankMode::quadrature}});
      if (c.bank == BankMode::sample) {
        c.bank_samples = positive("bank_samples");
        if (c.bank_samples < c.samples)
          uq.fail(uq.require("bank_samples").line,
                  "bank_samples must cover the fluctuation samples");
      } else {
        c.bank_nodes = positive("bank_nodes");
      }
      c.reference_nodes = positive("reference_nodes");
      c.seed = uq.get_uint64("seed");
      break;
    case RunMethod::fm3c:
      c.initial_samples = positive("initial_samples");
      c.bank = parse_enum<BankMode>(doc.source, uq.require("bank"), "bank",
                                    {{"sample", BankMode::sample},
                                     {"quadrature", BankMode::quadrature}});
      if (c.bank == BankMode::sample) {
        c.bank_samples = positive("bank_samples");
        if (c.bank_samples < c.initial_samples)
          uq.fail(uq.require("bank_samples").line,
                  "bank_samples must cover the fluctuation samples");
      } else {
        c.bank_nodes = positive("bank_nodes");
      }
      c.reference_nodes = positive("reference_nodes");
      c.seed = uq.get_uint64("seed");
      break;
    case RunMethod::gpc:
      c.chaos_order = positive("chaos_order");
      c.reference_nodes = positive("reference_nodes");
      break;
    case RunMethod::node_sweep: {
      c.node_counts = uq.get_int_list("node_counts");
      const IniEntry& e = uq.require("node_counts");
      for (size_t i = 0; i < c.node_counts.size(); ++i) {
        if (c.node_counts[i] < 1) uq.fail(e.line, "node counts must be positive");
        if (i && c.node_counts[i] <= c.node_counts[i - 1])
          uq.fail(e.line, "node counts must be strictly increasing");
      }
      const IniEntry& fr = uq.require("face_rules");
      for (const std::string& name : uq.get_string_list("face_rules")) {
        IniEntry fake{name, fr.line};
        c.face_rules.push_back(
            parse_enum<FaceRule>(doc.source, fake, "face_rules", face_rule_table()));
      }
      c.reference_nodes = positive("reference_nodes");
      break;
    }
    case RunMethod::phase:
      c.samples = positive("samples");
      c.bank_nodes = positive("bank_nodes");
      c.seed = uq.get_uint64("seed");
      break;
  }
  uq.finish();

  SectionReader out = reader("output", true);
  c.snapshots = out.get_double_list("snapshots");
  const IniEntry& snap = out.require("snapshots");
  for (size_t i = 0; i < c.snapshots.size(); ++i) {
    double t = c.snapshots[i];
    if (!(t > 0.0)) out.fail(snap.line, "snapshot times must be positive");
    if (i && c.snapshots[i] <= c.snapshots[i - 1])
      out.fail(snap.line, "snapshot times must be strictly increasing");
    if (t > c.t_final * (1.0 + 1e-12))
      out.fail(snap.line, "snapshot times must not exceed t_final");
    if (c.method != RunMethod::phase) {
      double n = std::round(t / c.dt);
      if (std::fabs(n * c.dt - t) > 1e-6 * std::max(t, c.dt))
        out.fail(snap.line, "snapshot time " + std::to_string(t) +
                                " does not land on a time step (dt = " +
                                std::to_string(c.dt) + ")");
    }
  }
  out.finish();

  for (const auto& s : doc.sections) {
    static const std::set<std::string> known = {"scenario", "grid",   "space", "input",
                                                "model",    "solver", "uq",    "output"};
    if (!known.count(s.name)) fail_at(doc.source, s.line, "unknown section [" + s.name + "]");
  }

  return c;
}

const std::vector<BuiltinScenario>& builtin_scenarios() {
  static const std::vector<BuiltinScenario> table = [] {
    std::vector<BuiltinScenario> v;
    for (const auto& s : builtin::scenario_table)
      v.push_back(BuiltinScenario{std::string(s.id), std::string(s.text)});
    return v;
  }();
  return table;
}

ScenarioConfig load_scenario(const std::string& path_or_id) {
  std::ifstream f(path_or_id);
  if (f) {
    std::ostringstream os;
    os << f.rdbuf();
    return parse_scenario(os.str(), path_or_id);
  }
  for (const auto& s : builtin_scenarios())
    if (s.id == path_or_id)
      return parse_scenario(s.text, "builtin:" + s.id);
  throw ConfigError("'" + path_or_id +
                    "' is neither a readable config file nor a builtin scenario id");
}

}  // namespace kinetic_uq
