#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mml/gates.hpp"
#include "mml/line.hpp"
#include "mml/stimulus.hpp"

namespace mml {

enum class RunMode { simulate, analytic, compare, gate, sweep };

const char* run_mode_name(RunMode m);
std::optional<RunMode> run_mode_from(const std::string& name);

struct SweepRange {
    double r_c_min = 0.0;
    double r_c_max = 0.0;
    int steps = 0;
};

// A fully described run, loadable from a JSON file. Cells, lines and nodes
// are 1-based in the JSON (matching the CSV column names); the in-memory
// structures are 0-based.
struct ScenarioConfig {
    RunMode mode = RunMode::simulate;
    std::optional<LineSpec> line;
    std::optional<Stimulus> stimulus;
    std::optional<GateNetworkSpec> network;
    std::optional<SweepRange> sweep;
    double dt = 1e-4;
    double t_end = 10.0;
    int sample_stride = 0; // 0 = auto
    bool steady_exit = true;
    int analytic_samples = 400;
    std::filesystem::path out_dir = ".";
    std::string prefix; // empty = mode name

    void validate() const; // throws ConfigError
};

// Parse and validate a config file. When `expected` is set (the CLI verb),
// a "mode" field in the file must agree with it; without `expected` the file
// must carry the mode itself.
ScenarioConfig load_scenario(const std::filesystem::path& path,
                             std::optional<RunMode> expected = std::nullopt);

// Execute the scenario and return the files written.
std::vector<std::filesystem::path> run_scenario(const ScenarioConfig& config);

} // namespace mml
