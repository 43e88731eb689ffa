#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "switchdiff/config.hpp"
#include "switchdiff/errors.hpp"
#include "switchdiff/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"switchdiff: simulator and verification harness for diffusions with two-state "
                 "regime switching"};
    std::string config_path;
    unsigned hw = std::thread::hardware_concurrency();
    int workers = hw > 0 ? static_cast<int>(hw) : 1;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;

    app.add_option("config", config_path, "Scenario config file (JSON)")->required();
    app.add_option("--workers", workers, "Worker thread cap for path batches")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "Output directory (overrides config out_dir)");
    app.add_option("--seed", seed, "Root seed (overrides config seed)")
        ->each([&](const std::string&) { seed_given = true; });

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open config file '" << config_path << "'\n";
        return switchdiff::kExitParseError;
    }
    std::ostringstream text;
    text << in.rdbuf();

    switchdiff::ScenarioConfig cfg;
    try {
        cfg = switchdiff::parse_config(text.str());
    } catch (const switchdiff::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return switchdiff::kExitParseError;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_given) cfg.seed = seed;

    return switchdiff::run_scenario(cfg, workers);
}
