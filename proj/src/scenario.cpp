#include "mml/scenario.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

#include "json.hpp"

#include "mml/analytic.hpp"
#include "mml/csv.hpp"
#include "mml/errors.hpp"

using nlohmann::json;

namespace mml {

const char* run_mode_name(RunMode m) {
    switch (m) {
    case RunMode::simulate: return "simulate";
    case RunMode::analytic: return "analytic";
    case RunMode::compare: return "compare";
    case RunMode::gate: return "gate";
    case RunMode::sweep: return "sweep";
    }
    return "?";
}

std::optional<RunMode> run_mode_from(const std::string& name) {
    for (RunMode m : {RunMode::simulate, RunMode::analytic, RunMode::compare, RunMode::gate,
                      RunMode::sweep})
        if (name == run_mode_name(m)) return m;
    return std::nullopt;
}

namespace {

void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("config: " + ctx + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("config: unknown key \"" + item.key() + "\" in " + ctx);
    }
}

double as_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError("config: " + what + " must be a number");
    return j.get<double>();
}

double require_number(const json& j, const std::string& ctx, const char* key) {
    if (!j.contains(key)) throw ConfigError("config: " + ctx + " is missing \"" + key + "\"");
    return as_number(j.at(key), ctx + "." + key);
}

double number_or(const json& j, const std::string& ctx, const char* key, double def) {
    return j.contains(key) ? as_number(j.at(key), ctx + "." + key) : def;
}

int require_int(const json& j, const std::string& ctx, const char* key) {
    if (!j.contains(key)) throw ConfigError("config: " + ctx + " is missing \"" + key + "\"");
    const json& v = j.at(key);
    if (!v.is_number_integer())
        throw ConfigError("config: " + ctx + "." + key + " must be an integer");
    return v.get<int>();
}

int int_or(const json& j, const std::string& ctx, const char* key, int def) {
    return j.contains(key) ? require_int(j, ctx, key) : def;
}

bool bool_or(const json& j, const std::string& ctx, const char* key, bool def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError("config: " + ctx + "." + key + " must be a boolean");
    return v.get<bool>();
}

std::string require_string(const json& j, const std::string& ctx, const char* key) {
    if (!j.contains(key)) throw ConfigError("config: " + ctx + " is missing \"" + key + "\"");
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError("config: " + ctx + "." + key + " must be a string");
    return v.get<std::string>();
}

std::vector<double> per_cell(const json& j, const std::string& ctx, const char* key, int n) {
    if (!j.contains(key)) throw ConfigError("config: " + ctx + " is missing \"" + key + "\"");
    const json& v = j.at(key);
    const std::string what = ctx + "." + key;
    if (v.is_number()) return std::vector<double>(static_cast<std::size_t>(n), v.get<double>());
    if (v.is_array()) {
        if (static_cast<int>(v.size()) != n)
            throw ConfigError("config: " + what + " must have exactly n entries");
        std::vector<double> xs;
        xs.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            xs.push_back(as_number(v[i], what + "[" + std::to_string(i) + "]"));
        return xs;
    }
    throw ConfigError("config: " + what + " must be a number or an array of n numbers");
}

MemristorParams parse_device_obj(const json& j, const std::string& ctx) {
    check_keys(j, ctx, {"r_on", "r_off", "beta", "v_t"});
    MemristorParams p;
    p.r_on = require_number(j, ctx, "r_on");
    p.r_off = require_number(j, ctx, "r_off");
    p.beta = require_number(j, ctx, "beta");
    p.v_t = require_number(j, ctx, "v_t");
    return p;
}

std::vector<MemristorParams> parse_devices(const json& j, const std::string& ctx, int n) {
    if (!j.contains("device")) throw ConfigError("config: " + ctx + " is missing \"device\"");
    const json& v = j.at("device");
    const std::string what = ctx + ".device";
    if (v.is_object())
        return std::vector<MemristorParams>(static_cast<std::size_t>(n),
                                            parse_device_obj(v, what));
    if (v.is_array()) {
        if (static_cast<int>(v.size()) != n)
            throw ConfigError("config: " + what + " must have exactly n entries");
        std::vector<MemristorParams> ds;
        ds.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            ds.push_back(parse_device_obj(v[i], what + "[" + std::to_string(i) + "]"));
        return ds;
    }
    throw ConfigError("config: " + what + " must be an object or an array of n objects");
}

LineSpec parse_line(const json& j, const std::string& ctx) {
    check_keys(j, ctx, {"n", "v_p", "coupling_r", "bias_r", "device", "initial_memristance"});
    LineSpec s;
    s.n = require_int(j, ctx, "n");
    if (s.n < 1) throw ConfigError("config: " + ctx + ".n must be at least 1");
    s.v_p = require_number(j, ctx, "v_p");
    s.coupling_r = per_cell(j, ctx, "coupling_r", s.n);
    s.bias_r = per_cell(j, ctx, "bias_r", s.n);
    s.device = parse_devices(j, ctx, s.n);
    if (j.contains("initial_memristance")) {
        s.initial_memristance = per_cell(j, ctx, "initial_memristance", s.n);
    } else {
        s.initial_memristance.reserve(s.device.size());
        for (const auto& d : s.device) s.initial_memristance.push_back(d.r_on);
    }
    s.validate();
    return s;
}

Stimulus parse_stimulus(const json& j, const std::string& ctx) {
    check_keys(j, ctx, {"kind", "amplitude", "t_start", "t_end", "segments"});
    const std::string kind = require_string(j, ctx, "kind");
    Stimulus s;
    if (kind == "none") {
        s = Stimulus::open();
    } else if (kind == "step") {
        s = Stimulus::step_at(require_number(j, ctx, "amplitude"),
                              number_or(j, ctx, "t_start", 0.0));
    } else if (kind == "pulse") {
        s = Stimulus::rectangular(require_number(j, ctx, "amplitude"),
                                  number_or(j, ctx, "t_start", 0.0),
                                  require_number(j, ctx, "t_end"));
    } else if (kind == "piecewise") {
        if (!j.contains("segments") || !j.at("segments").is_array())
            throw ConfigError("config: " + ctx + ".segments must be an array of [t, v] pairs");
        std::vector<std::pair<double, double>> segs;
        for (std::size_t i = 0; i < j.at("segments").size(); ++i) {
            const json& seg = j.at("segments")[i];
            const std::string what = ctx + ".segments[" + std::to_string(i) + "]";
            if (!seg.is_array() || seg.size() != 2)
                throw ConfigError("config: " + what + " must be a [t, v] pair");
            segs.emplace_back(as_number(seg[0], what + "[0]"), as_number(seg[1], what + "[1]"));
        }
        s = Stimulus::piecewise(std::move(segs));
    } else {
        throw ConfigError("config: " + ctx + ".kind must be none, step, pulse or piecewise");
    }
    s.validate();
    return s;
}

GateNetworkSpec parse_network(const json& j, const std::string& ctx) {
    check_keys(j, ctx,
               {"lines", "line", "count", "stimuli", "couplings", "output_line", "t_max",
                "input_skew"});
    GateNetworkSpec g;
    if (j.contains("lines")) {
        if (j.contains("line") || j.contains("count"))
            throw ConfigError("config: " + ctx + " takes either \"lines\" or \"line\"+\"count\"");
        const json& ls = j.at("lines");
        if (!ls.is_array() || ls.empty())
            throw ConfigError("config: " + ctx + ".lines must be a non-empty array");
        for (std::size_t i = 0; i < ls.size(); ++i)
            g.lines.push_back(parse_line(ls[i], ctx + ".lines[" + std::to_string(i) + "]"));
    } else if (j.contains("line")) {
        const int count = int_or(j, ctx, "count", 3);
        if (count < 1) throw ConfigError("config: " + ctx + ".count must be at least 1");
        const LineSpec tpl = parse_line(j.at("line"), ctx + ".line");
        g.lines.assign(static_cast<std::size_t>(count), tpl);
    } else {
        throw ConfigError("config: " + ctx + " needs \"lines\" or \"line\"");
    }

    if (!j.contains("stimuli") || !j.at("stimuli").is_array())
        throw ConfigError("config: " + ctx + ".stimuli must be an array (one per line)");
    const json& st = j.at("stimuli");
    if (st.size() != g.lines.size())
        throw ConfigError("config: " + ctx + ".stimuli must have one entry per line");
    for (std::size_t i = 0; i < st.size(); ++i)
        g.stimuli.push_back(parse_stimulus(st[i], ctx + ".stimuli[" + std::to_string(i) + "]"));

    if (!j.contains("couplings") || !j.at("couplings").is_array())
        throw ConfigError("config: " + ctx + ".couplings must be an array");
    const json& cs = j.at("couplings");
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string what = ctx + ".couplings[" + std::to_string(i) + "]";
        check_keys(cs[i], what, {"line_a", "node_a", "line_b", "node_b", "r_c"});
        Coupling c;
        c.a.line = require_int(cs[i], what, "line_a") - 1;
        c.a.node = require_int(cs[i], what, "node_a") - 1;
        c.b.line = require_int(cs[i], what, "line_b") - 1;
        c.b.node = require_int(cs[i], what, "node_b") - 1;
        c.r_c = require_number(cs[i], what, "r_c");
        g.couplings.push_back(c);
    }

    g.output_line = require_int(j, ctx, "output_line") - 1;
    g.t_max = number_or(j, ctx, "t_max", 25.0);
    g.input_skew = number_or(j, ctx, "input_skew", 0.0);
    g.validate();
    return g;
}

SweepRange parse_sweep(const json& j, const std::string& ctx) {
    check_keys(j, ctx, {"r_c_min", "r_c_max", "steps"});
    SweepRange s;
    s.r_c_min = require_number(j, ctx, "r_c_min");
    s.r_c_max = require_number(j, ctx, "r_c_max");
    s.steps = require_int(j, ctx, "steps");
    return s;
}

} // namespace

void ScenarioConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("config: dt must be positive");
    if (!(t_end >= dt)) throw ConfigError("config: t_end must be at least dt");
    if (sample_stride < 0) throw ConfigError("config: sample_stride must be >= 0");
    if (analytic_samples < 2) throw ConfigError("config: analytic_samples must be at least 2");

    switch (mode) {
    case RunMode::simulate:
    case RunMode::compare:
        if (!line) throw ConfigError("config: this mode needs a \"line\" section");
        if (!stimulus) throw ConfigError("config: this mode needs a \"stimulus\" section");
        break;
    case RunMode::analytic:
        if (!line) throw ConfigError("config: this mode needs a \"line\" section");
        break;
    case RunMode::gate:
        if (!network) throw ConfigError("config: this mode needs a \"network\" section");
        break;
    case RunMode::sweep:
        if (!network) throw ConfigError("config: this mode needs a \"network\" section");
        if (!sweep) throw ConfigError("config: this mode needs a \"sweep\" section");
        if (!(sweep->r_c_min > 0.0) || !(sweep->r_c_max >= sweep->r_c_min))
            throw ConfigError("config: sweep needs 0 < r_c_min <= r_c_max");
        if (sweep->steps < 1) throw ConfigError("config: sweep.steps must be at least 1");
        break;
    }
    if (line) line->validate();
    if (stimulus) stimulus->validate();
    if (network) network->validate();
    if (mode == RunMode::analytic || mode == RunMode::compare) {
        if (line && !line->is_uniform())
            throw ConfigError("config: closed forms need a homogeneous line");
    }
}

ScenarioConfig load_scenario(const std::filesystem::path& path, std::optional<RunMode> expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    check_keys(j, "top level",
               {"mode", "line", "stimulus", "network", "sweep", "dt", "t_end", "sample_stride",
                "steady_exit", "analytic_samples", "out_dir", "prefix"});

    ScenarioConfig cfg;
    if (j.contains("mode")) {
        const std::string name = require_string(j, "top level", "mode");
        const auto m = run_mode_from(name);
        if (!m) throw ConfigError("config: unknown mode \"" + name + "\"");
        if (expected && *m != *expected)
            throw ConfigError("config: file says mode \"" + name + "\" but the command is \"" +
                              run_mode_name(*expected) + "\"");
        cfg.mode = *m;
    } else if (expected) {
        cfg.mode = *expected;
    } else {
        throw ConfigError("config: missing \"mode\"");
    }

    cfg.dt = number_or(j, "top level", "dt", cfg.dt);
    cfg.t_end = number_or(j, "top level", "t_end", cfg.t_end);
    cfg.sample_stride = int_or(j, "top level", "sample_stride", cfg.sample_stride);
    cfg.steady_exit = bool_or(j, "top level", "steady_exit", cfg.steady_exit);
    cfg.analytic_samples = int_or(j, "top level", "analytic_samples", cfg.analytic_samples);
    if (j.contains("out_dir")) cfg.out_dir = require_string(j, "top level", "out_dir");
    if (j.contains("prefix")) cfg.prefix = require_string(j, "top level", "prefix");
    if (j.contains("line")) cfg.line = parse_line(j.at("line"), "line");
    if (j.contains("stimulus")) cfg.stimulus = parse_stimulus(j.at("stimulus"), "stimulus");
    if (j.contains("network")) cfg.network = parse_network(j.at("network"), "network");
    if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"), "sweep");

    cfg.validate();
    return cfg;
}

std::vector<std::filesystem::path> run_scenario(const ScenarioConfig& config) {
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + config.out_dir.string());
    const std::string prefix = config.prefix.empty() ? run_mode_name(config.mode) : config.prefix;
    const auto file = [&](const std::string& suffix) {
        return config.out_dir / (prefix + "_" + suffix);
    };

    SimOptions opts;
    opts.dt = config.dt;
    opts.sample_stride = config.sample_stride;
    opts.steady_exit = config.steady_exit;

    std::vector<std::filesystem::path> written;
    switch (config.mode) {
    case RunMode::simulate: {
        const SimTrace trace = simulate_line(*config.line, *config.stimulus, config.t_end, opts);
        emit_trace(trace, written.emplace_back(file("trace.csv")));
        emit_events(detect_events(trace), written.emplace_back(file("events.csv")));
        break;
    }
    case RunMode::analytic: {
        const auto params = homogeneous_params(*config.line);
        const AnalyticSummary summary = analytic_summary(params);
        emit_analytic_report(summary, written.emplace_back(file("report.txt")));
        if (summary.duration)
            emit_analytic_curve(analytic_waveforms(params, config.analytic_samples),
                                written.emplace_back(file("curve.csv")));
        // The report documents what exists; an incomplete closed form is
        // still an infeasible request.
        if (!summary.infeasible_reason.empty())
            throw InfeasibleError(summary.infeasible_reason);
        break;
    }
    case RunMode::compare: {
        const SimTrace trace = simulate_line(*config.line, *config.stimulus, config.t_end, opts);
        const EventLog events = detect_events(trace);
        const AnalyticSummary summary = analytic_summary(homogeneous_params(*config.line));
        emit_events(events, written.emplace_back(file("events.csv")));
        emit_comparison(compare_line(trace, events, summary),
                        written.emplace_back(file("compare.txt")));
        break;
    }
    case RunMode::gate: {
        std::array<NetworkTrace, 4> traces;
        const TruthTableResult table = classify_gate_traced(*config.network, opts, traces);
        emit_truth_table(table, *config.network, written.emplace_back(file("truth_table.txt")));
        for (int a = 0; a <= 1; ++a)
            for (int b = 0; b <= 1; ++b) {
                const NetworkTrace& tr = traces[(a ? 2 : 0) + (b ? 1 : 0)];
                const std::string name = "in" + std::to_string(a) + std::to_string(b) +
                                         "_out_trace.csv";
                emit_trace(tr.lines[config.network->output_line],
                           written.emplace_back(file(name)));
            }
        break;
    }
    case RunMode::sweep: {
        const CouplingSweep sw = sweep_coupling(*config.network, config.sweep->r_c_min,
                                                config.sweep->r_c_max, config.sweep->steps, opts);
        emit_sweep(sw, written.emplace_back(file("sweep.csv")));
        emit_sweep_windows(sw, written.emplace_back(file("windows.txt")));
        break;
    }
    }
    return written;
}

} // namespace mml
