#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kinetic_uq/scenario.hpp"

namespace kinetic_uq {

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  int threads = 1;
  std::string out_dir = ".";
};

struct RunResult {
  std::vector<std::string> files;     // artifact names relative to out_dir
  std::vector<std::string> warnings;  // time step / mesh diagnostics
};

/// Executes one scenario, writing its CSV artifacts and a key = value manifest
/// into out_dir. For a fixed config and seed the CSV bytes do not depend on
/// the thread count. On failure the manifest records status = error with the
/// message and the artifacts written so far, then the exception propagates.
RunResult run_scenario(const ScenarioConfig& c, const RunOptions& opt);

/// --threads beats KINETIC_UQ_THREADS beats 1. Pass 0 for "not given".
int resolve_threads(int cli_threads);

}  // namespace kinetic_uq
