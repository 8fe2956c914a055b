#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kinetic_uq/runner.hpp"
#include "kinetic_uq/scenario.hpp"
#include "kinetic_uq/version.hpp"

namespace py = pybind11;
using namespace kinetic_uq;

namespace {

py::dict describe(const ScenarioConfig& c) {
  py::dict d;
  d["id"] = c.id;
  d["title"] = c.title;
  d["model"] = c.model;
  d["method"] = method_name(c.method);
  d["n_cells"] = c.n_cells;
  d["w_min"] = c.w_min;
  d["w_max"] = c.w_max;
  d["dt"] = c.dt;
  d["t_final"] = c.t_final;
  d["seed"] = c.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_kinetic_uq, m) {
  m.doc() = "Structure preserving solvers for kinetic equations with random inputs";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("version", [] { return std::string(version_string); });

  m.def("scenario_ids", [] {
    std::vector<std::string> ids;
    for (const BuiltinScenario& s : builtin_scenarios()) ids.push_back(s.id);
    return ids;
  });

  m.def(
      "validate",
      [](const std::string& path_or_id) { return describe(load_scenario(path_or_id)); },
      py::arg("config"),
      "Parses and validates a scenario file or builtin id, returning the "
      "resolved header fields.");

  m.def(
      "run",
      [](const std::string& path_or_id, const std::string& out_dir,
         std::optional<std::uint64_t> seed, int threads) {
        const ScenarioConfig c = load_scenario(path_or_id);
        RunOptions opt;
        opt.out_dir = out_dir;
        opt.seed = seed;
        opt.threads = resolve_threads(threads);
        const RunResult r = run_scenario(c, opt);
        py::dict d;
        d["files"] = r.files;
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("config"), py::arg("out_dir") = ".", py::arg("seed") = py::none(),
      py::arg("threads") = 0,
      "Runs a scenario, writing CSV artifacts and a manifest into out_dir.");
}
