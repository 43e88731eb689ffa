#pragma once

#include <string>

#include "switchdiff/config.hpp"

namespace switchdiff {

// Process exit codes reported by run_scenario / the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitCriterionRefused = 3;
inline constexpr int kExitEstimationFailure = 4;
inline constexpr int kExitNumericalBlowup = 5;

/// Executes one scenario: writes manifest.json plus the command-specific
/// CSV/JSON artifacts into cfg.out_dir (atomically, temp-then-rename) and
/// returns the exit status. Diagnostics go to stderr.
int run_scenario(const ScenarioConfig& cfg, int workers = 1);

}  // namespace switchdiff
