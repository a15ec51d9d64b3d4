#include "mml/line.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mml/errors.hpp"

namespace mml {

namespace {

void check_positive_finite(const std::vector<double>& xs, const char* what) {
    for (double x : xs)
        if (!(x > 0.0) || !std::isfinite(x))
            throw ConfigError(std::string("line: ") + what + " entries must be positive and finite");
}

double interp_time(double t0, double y0, double t1, double y1, double level) {
    // y0 < level <= y1 by construction; still guard the degenerate step
    if (y1 == y0) return t1;
    return t0 + (level - y0) / (y1 - y0) * (t1 - t0);
}

} // namespace

LineSpec LineSpec::uniform(int n, double coupling, double bias, double v_p,
                           const MemristorParams& dev) {
    LineSpec s;
    s.n = n;
    s.v_p = v_p;
    s.coupling_r.assign(static_cast<std::size_t>(n), coupling);
    s.bias_r.assign(static_cast<std::size_t>(n), bias);
    s.device.assign(static_cast<std::size_t>(n), dev);
    s.initial_memristance.assign(static_cast<std::size_t>(n), dev.r_on);
    return s;
}

void LineSpec::validate() const {
    if (n < 1) throw ConfigError("line: n must be at least 1");
    const auto un = static_cast<std::size_t>(n);
    if (coupling_r.size() != un || bias_r.size() != un || device.size() != un ||
        initial_memristance.size() != un)
        throw ConfigError("line: per-cell arrays must all have length n");
    if (!std::isfinite(v_p)) throw ConfigError("line: v_p must be finite");
    check_positive_finite(coupling_r, "coupling_r");
    check_positive_finite(bias_r, "bias_r");
    for (std::size_t i = 0; i < un; ++i) {
        device[i].validate();
        const double m0 = initial_memristance[i];
        if (!(m0 >= device[i].r_on) || !(m0 <= device[i].r_off))
            throw ConfigError("line: initial memristance of cell " + std::to_string(i + 1) +
                              " lies outside [r_on, r_off]");
    }
}

bool LineSpec::is_uniform() const {
    if (n < 1) return false;
    for (int i = 1; i < n; ++i) {
        if (coupling_r[i] != coupling_r[0] || bias_r[i] != bias_r[0]) return false;
        if (initial_memristance[i] != initial_memristance[0]) return false;
        const auto &d = device[i], &d0 = device[0];
        if (d.r_on != d0.r_on || d.r_off != d0.r_off || d.beta != d0.beta || d.v_t != d0.v_t)
            return false;
    }
    return true;
}

TridiagonalSystem assemble_line(const LineSpec& spec, std::span<const double> memristance,
                                std::optional<double> v_in) {
    const int n = spec.n;
    if (memristance.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("assemble_line: memristance length mismatch");
    TridiagonalSystem sys;
    sys.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double diag = 1.0 / spec.bias_r[i] + 1.0 / memristance[i];
        double rhs = spec.v_p / spec.bias_r[i];
        if (i > 0) {
            const double g = 1.0 / spec.coupling_r[i];
            diag += g;
            sys.sub[i] = -g;
        } else if (v_in) {
            const double g = 1.0 / spec.coupling_r[0];
            diag += g;
            rhs += *v_in * g;
        }
        if (i + 1 < n) {
            const double g = 1.0 / spec.coupling_r[i + 1];
            diag += g;
            sys.super[i] = -g;
        }
        sys.diag[i] = diag;
        sys.rhs[i] = rhs;
    }
    return sys;
}

double SimTrace::voltage_at(double t, int cell) const {
    if (times.empty()) throw std::invalid_argument("voltage_at: empty trace");
    if (t < times.front() || t > times.back())
        throw std::invalid_argument("voltage_at: time outside the recorded window");
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    if (hi == 0 || times[hi] == t) return voltage(hi, cell);
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return voltage(lo, cell) + w * (voltage(hi, cell) - voltage(lo, cell));
}

namespace {

// Shared stepping core for simulate_line / step_line.
struct LineEngine {
    const LineSpec& spec;
    TridiagonalSystem sys;
    std::vector<double> scratch;
    std::vector<double> volts;
    std::vector<double> rates;

    explicit LineEngine(const LineSpec& s) : spec(s), rates(s.n, 0.0) {}

    void solve(const std::vector<double>& m, std::optional<double> v_in) {
        sys = assemble_line(spec, m, v_in);
        solve_tridiagonal(sys, scratch, volts);
        for (double v : volts)
            if (!std::isfinite(v)) throw NumericalError("line: non-finite node voltage");
    }

    // Fills `rates` from the current volts; returns true if any is non-zero.
    bool compute_rates(const std::vector<double>& m) {
        bool active = false;
        for (int i = 0; i < spec.n; ++i) {
            rates[i] = memristance_rate(volts[i], {m[i]}, spec.device[i]);
            if (rates[i] != 0.0) active = true;
        }
        return active;
    }

    void advance(std::vector<double>& m, double dt) const {
        for (int i = 0; i < spec.n; ++i)
            m[i] = std::clamp(m[i] + rates[i] * dt, spec.device[i].r_on, spec.device[i].r_off);
    }
};

} // namespace

SimTrace simulate_line(const LineSpec& spec, const Stimulus& stim, double t_end,
                       const SimOptions& opts) {
    spec.validate();
    stim.validate();
    if (!(opts.dt > 0.0) || !std::isfinite(opts.dt))
        throw ConfigError("simulate: dt must be positive and finite");
    if (!(t_end >= opts.dt)) throw ConfigError("simulate: t_end must be at least one dt");
    if (opts.sample_stride < 0) throw ConfigError("simulate: sample_stride must be >= 0");

    const double dt = opts.dt;
    const auto n_full = static_cast<long long>(std::floor(t_end / dt + 1e-9));
    const bool partial = t_end - static_cast<double>(n_full) * dt > dt * 1e-9;
    const long long n_steps = n_full + (partial ? 1 : 0);
    const auto step_time = [&](long long k) {
        return (partial && k == n_steps) ? t_end : static_cast<double>(k) * dt;
    };
    const long long stride =
        opts.sample_stride > 0
            ? opts.sample_stride
            : std::max<long long>(1, (n_steps + 1 + 99999) / 100000);

    SimTrace trace;
    trace.spec = spec;

    const int n = spec.n;
    std::vector<double> m = spec.initial_memristance;
    std::vector<double> prev_m(n), prev_v(n);
    double prev_t = 0.0;
    LineEngine eng(spec);

    long long last_recorded = -1;
    const auto record = [&](long long k, double t, const std::vector<double>& v,
                            const std::vector<double>& mm) {
        trace.times.push_back(t);
        trace.voltages.insert(trace.voltages.end(), v.begin(), v.end());
        trace.memristances.insert(trace.memristances.end(), mm.begin(), mm.end());
        last_recorded = k;
    };

    for (long long k = 0; k <= n_steps; ++k) {
        const double t = step_time(k);
        eng.solve(m, stim.value_at(t));

        bool crossing = false;
        if (k > 0) {
            for (int i = 0; i < n && !crossing; ++i) {
                const double vt = spec.device[i].v_t;
                if (prev_v[i] < vt && eng.volts[i] >= vt) crossing = true;
                const double lvl = completion_level(spec.device[i]);
                if (prev_m[i] < lvl && m[i] >= lvl) crossing = true;
            }
            if (crossing && last_recorded != k - 1) record(k - 1, prev_t, prev_v, prev_m);
        }
        if (crossing || k % stride == 0 || k == n_steps) record(k, t, eng.volts, m);
        if (k == n_steps) break;

        const bool active = eng.compute_rates(m);
        if (opts.steady_exit && !active && stim.settled_by(t)) {
            // Nothing can change any more: same solve holds for all later t.
            if (last_recorded != k) record(k, t, eng.volts, m);
            if (t < t_end) record(n_steps, t_end, eng.volts, m);
            break;
        }

        prev_t = t;
        prev_v = eng.volts;
        prev_m = m;
        eng.advance(m, dt);
    }
    return trace;
}

std::vector<double> step_line(const LineSpec& spec, LineState& state, const Stimulus& stim,
                              double dt) {
    spec.validate();
    stim.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("step: dt must be positive and finite");
    if (state.memristance.size() != static_cast<std::size_t>(spec.n))
        throw ConfigError("step: state size does not match the line");
    LineEngine eng(spec);
    eng.solve(state.memristance, stim.value_at(state.t));
    eng.compute_rates(state.memristance);
    eng.advance(state.memristance, dt);
    state.t += dt;
    return eng.volts;
}

EventLog detect_events(const SimTrace& trace) {
    const int n = trace.spec.n;
    EventLog log;
    log.onset.resize(n);
    log.completion.resize(n);
    const std::size_t ns = trace.samples();
    if (ns == 0) return log;

    for (int i = 0; i < n; ++i) {
        const double vt = trace.spec.device[i].v_t;
        if (trace.voltage(0, i) >= vt) log.onset[i] = trace.times.front();
        const double lvl = completion_level(trace.spec.device[i]);
        if (trace.memristance(0, i) >= lvl) log.completion[i] = trace.times.front();
    }
    for (std::size_t k = 1; k < ns; ++k) {
        for (int i = 0; i < n; ++i) {
            if (!log.onset[i]) {
                const double vt = trace.spec.device[i].v_t;
                const double a = trace.voltage(k - 1, i), b = trace.voltage(k, i);
                if (a < vt && b >= vt)
                    log.onset[i] = interp_time(trace.times[k - 1], a, trace.times[k], b, vt);
            }
            if (!log.completion[i]) {
                const double lvl = completion_level(trace.spec.device[i]);
                const double a = trace.memristance(k - 1, i), b = trace.memristance(k, i);
                if (a < lvl && b >= lvl)
                    log.completion[i] = interp_time(trace.times[k - 1], a, trace.times[k], b, lvl);
            }
        }
    }
    return log;
}

std::optional<TauStats> tau_stats(const EventLog& events, int n_cells) {
    // Interior = cells 2 .. n-4 (0-based): the two cells at each end see
    // boundary effects and are excluded.
    std::vector<double> increments;
    for (int i = 2; i + 1 <= n_cells - 3; ++i) {
        const auto& a = events.onset[i];
        const auto& b = events.onset[i + 1];
        if (a && b) increments.push_back(*b - *a);
    }
    if (increments.empty()) return std::nullopt;
    double mean = 0.0;
    for (double x : increments) mean += x;
    mean /= static_cast<double>(increments.size());
    double var = 0.0;
    for (double x : increments) var += (x - mean) * (x - mean);
    var /= static_cast<double>(increments.size());
    TauStats st;
    st.mean = mean;
    st.stddev = std::sqrt(var);
    st.count = static_cast<int>(increments.size());
    return st;
}

double traveling_wave_residual(const SimTrace& trace, double tau, int cell) {
    const int n = trace.spec.n;
    if (cell < 2 || cell + 1 > n - 3)
        throw std::invalid_argument("traveling_wave_residual: both cells must be interior");
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("traveling_wave_residual: tau must be non-negative");
    if (trace.samples() < 2)
        throw std::invalid_argument("traveling_wave_residual: trace too short");

    const double lo = trace.times.front() + tau;
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < trace.samples(); ++k) {
        const double t = trace.times[k];
        if (t < lo) continue;
        const double predicted = trace.voltage_at(t - tau, cell);
        worst = std::max(worst, std::abs(trace.voltage(k, cell + 1) - predicted));
        ++used;
    }
    if (used < 2)
        throw NumericalError("traveling_wave_residual: shift leaves no overlap window");
    return worst;
}

} // namespace mml
