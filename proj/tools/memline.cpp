// memline: transient simulation and closed-form analysis of memristive
// transmission lines, plus gate classification of coupled-line networks.
//
// Exit codes: 0 success, 2 bad usage/config, 3 infeasible closed form,
// 4 numerical failure.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "mml/errors.hpp"
#include "mml/scenario.hpp"

namespace {

struct Overrides {
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<std::string> out_dir;
};

int run(mml::RunMode mode, const std::string& config_path, const Overrides& ov) {
    mml::ScenarioConfig cfg = mml::load_scenario(config_path, mode);
    if (ov.dt) cfg.dt = *ov.dt;
    if (ov.t_end) {
        cfg.t_end = *ov.t_end;
        if (cfg.network) cfg.network->t_max = *ov.t_end;
    }
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    const auto written = mml::run_scenario(cfg);
    for (const auto& p : written) std::printf("%s\n", p.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"memristive transmission line toolkit"};
    app.require_subcommand(1);

    struct Cmd {
        mml::RunMode mode;
        const char* name;
        const char* help;
    };
    const Cmd cmds[] = {
        {mml::RunMode::simulate, "simulate", "transient run of one line (trace + events)"},
        {mml::RunMode::analytic, "analytic", "closed-form constants, delay and duration"},
        {mml::RunMode::compare, "compare", "numeric vs closed-form delay/duration"},
        {mml::RunMode::gate, "gate", "truth table of a coupled-line gate"},
        {mml::RunMode::sweep, "sweep", "gate kind as a function of coupling strength"},
    };

    std::string config_path;
    Overrides ov;
    std::optional<mml::RunMode> selected;
    for (const Cmd& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("config", config_path, "scenario config (JSON)")->required();
        sub->add_option("--dt", ov.dt, "override the integration step (t0)");
        sub->add_option("--t-end", ov.t_end, "override the time horizon (t0)");
        sub->add_option("--out-dir", ov.out_dir, "override the output directory");
        sub->callback([&selected, mode = c.mode] { selected = mode; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run(*selected, config_path, ov);
    } catch (const mml::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const mml::InfeasibleError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return 3;
    } catch (const mml::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
