#pragma once

// Verification suites: the thirteen keyed entries a `verify` run reports,
// the per-predicate classification report, and the coverage listing.
// Everything is deterministic given (scene, seed): samples come from one
// splitmix64 stream per purpose, consumed in a fixed order.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kropina/scene.hpp"

namespace kropina {

struct SuiteOptions {
  std::string selector = "all";  // all | classify | dynamics
  bool timings = true;
  std::optional<std::uint64_t> seed;  // overrides scene.seed
  std::optional<int> points;          // overrides scene.points
};

// All thirteen entries (non-selected ones marked skipped), verdicts joined
// against the scene's expected-verdict table when one is declared.
nlohmann::ordered_json run_suite(const SceneRuntime& rt,
                                 const SuiteOptions& opt);

// True when every selected entry matches the declared expectation (or no
// table is declared).
bool suite_matches(const nlohmann::ordered_json& result);

// {scene, seed, tolerances, predicates: [...], points_evaluated}.
nlohmann::ordered_json classification_report(
    const SceneRuntime& rt, std::optional<std::uint64_t> seed = {},
    std::optional<int> points = {});

// {suite key, operations exercised, claim checked} rows for --list-coverage.
std::vector<std::array<std::string, 3>> coverage_table();

}  // namespace kropina
