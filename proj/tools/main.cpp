#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "kinetic_uq/runner.hpp"
#include "kinetic_uq/scenario.hpp"
#include "kinetic_uq/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"structure-preserving kinetic solvers with uncertainty quantification"};
  app.set_version_flag("--version", std::string(kinetic_uq::version_string));
  app.require_subcommand(1);

  std::string run_config;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_dir = ".";
  CLI::App* run = app.add_subcommand("run", "execute a scenario and write its artifacts");
  run->add_option("--config", run_config, "scenario file path or builtin id")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--threads", threads,
                  "worker threads (default: KINETIC_UQ_THREADS, then 1)");
  run->add_option("--out", out_dir, "output directory (default: current)");

  CLI::App* list = app.add_subcommand("list", "print the builtin scenario ids");

  std::string validate_config;
  CLI::App* validate =
      app.add_subcommand("validate", "parse and check a scenario config");
  validate->add_option("--config", validate_config, "scenario file path or builtin id")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& s : kinetic_uq::builtin_scenarios()) {
        kinetic_uq::ScenarioConfig c =
            kinetic_uq::parse_scenario(s.text, "builtin:" + s.id);
        std::printf("%-14s %-11s %s\n", c.id.c_str(),
                    kinetic_uq::method_name(c.method).c_str(), c.title.c_str());
      }
      return 0;
    }
    if (validate->parsed()) {
      kinetic_uq::ScenarioConfig c = kinetic_uq::load_scenario(validate_config);
      std::printf("ok: %s (model %s, method %s, %d cells, dt %.17g, t_final %.17g)\n",
                  c.id.c_str(), c.model.c_str(),
                  kinetic_uq::method_name(c.method).c_str(), c.n_cells, c.dt,
                  c.t_final);
      return 0;
    }
    kinetic_uq::ScenarioConfig c = kinetic_uq::load_scenario(run_config);
    kinetic_uq::RunOptions opt;
    if (seed_opt->count() > 0) opt.seed = seed;
    opt.threads = kinetic_uq::resolve_threads(threads);
    opt.out_dir = out_dir;
    kinetic_uq::RunResult res = kinetic_uq::run_scenario(c, opt);
    for (const std::string& w : res.warnings)
      std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const std::string& f : res.files)
      std::printf("wrote %s/%s\n", out_dir.c_str(), f.c_str());
    return 0;
  } catch (const kinetic_uq::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
