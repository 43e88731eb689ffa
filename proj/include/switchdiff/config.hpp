#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "switchdiff/estimate.hpp"
#include "switchdiff/model.hpp"

namespace switchdiff {

enum class Command { Criterion, Simulate, Hit, Sweep, Drift, Invariant };

std::string command_name(Command c);

/// Fully-resolved scenario description. parse_config() fills every default
/// and records which ones were applied, so scenarios re-parsed from the
/// emitted form reproduce the same resolved configuration.
struct ScenarioConfig {
    Command command = Command::Criterion;
    SwitchingDiffusionModel model;

    std::vector<double> x0;            // start point (scalar inputs broadcast to (s,0,..,0))
    int z0 = 0;
    double m1 = 0.0;                   // hitting radius
    int n_paths = 1000;
    double dt = 1e-3;
    double horizon = 0.0;
    std::optional<double> max_time;    // hit/sweep censor time; default 50 * theory bound
    std::uint64_t seed = 0;
    int record_stride = 1;
    std::vector<StartPoint> starts;    // sweep
    int bins = 40;                     // invariant
    double burn_in = 0.0;              // invariant; default horizon / 10
    std::optional<double> box_halfwidth;  // invariant; default 3 * m1
    std::optional<double> eps;         // criterion balance parameter override
    bool dump_paths = false;           // simulate: write path_*.csv / events_*.csv
    std::string out_dir = ".";

    std::vector<std::string> applied_defaults;  // field names that came from defaults
};

/// Parses and validates a JSON scenario document. Unknown keys are rejected;
/// errors name the offending field. Throws ParameterError.
ScenarioConfig parse_config(const std::string& json_text);

/// Serializes the resolved configuration back to JSON. Round trip:
/// parse_config(emit_config(cfg)) resolves to the same configuration.
std::string emit_config(const ScenarioConfig& cfg);

}  // namespace switchdiff
