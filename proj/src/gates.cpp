#include "mml/gates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mml/errors.hpp"

namespace mml {

GateNetworkSpec GateNetworkSpec::y_junction(const LineSpec& line, const Stimulus& input_stim,
                                            double r_c, double t_max) {
    GateNetworkSpec g;
    g.lines = {line, line, line};
    g.stimuli = {input_stim, input_stim, Stimulus::open()};
    g.couplings = {
        {{0, line.n - 1}, {2, 0}, r_c},
        {{1, line.n - 1}, {2, 0}, r_c},
    };
    g.output_line = 2;
    g.t_max = t_max;
    return g;
}

void GateNetworkSpec::validate() const {
    if (lines.empty()) throw ConfigError("network: needs at least one line");
    if (stimuli.size() != lines.size())
        throw ConfigError("network: one stimulus per line required");
    for (const auto& l : lines) l.validate();
    for (const auto& s : stimuli) s.validate();
    if (output_line < 0 || output_line >= static_cast<int>(lines.size()))
        throw ConfigError("network: output_line out of range");
    if (stimuli[output_line].kind != StimulusKind::none)
        throw ConfigError("network: the output line must be unstimulated");
    for (const auto& c : couplings) {
        for (const NodeRef& ref : {c.a, c.b}) {
            if (ref.line < 0 || ref.line >= static_cast<int>(lines.size()))
                throw ConfigError("network: coupling references line " + std::to_string(ref.line) +
                                  " which does not exist");
            if (ref.node < 0 || ref.node >= lines[ref.line].n)
                throw ConfigError("network: coupling references node " + std::to_string(ref.node) +
                                  " outside line " + std::to_string(ref.line));
        }
        if (c.a.line == c.b.line && c.a.node == c.b.node)
            throw ConfigError("network: coupling connects a node to itself");
        if (!(c.r_c > 0.0) || !std::isfinite(c.r_c))
            throw ConfigError("network: coupling resistance must be positive and finite");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw ConfigError("network: t_max must be positive and finite");
    if (!(input_skew >= 0.0) || !std::isfinite(input_skew))
        throw ConfigError("network: input_skew must be non-negative and finite");
}

std::vector<int> GateNetworkSpec::input_lines() const {
    std::vector<int> in;
    for (int l = 0; l < static_cast<int>(lines.size()); ++l)
        if (l != output_line) in.push_back(l);
    return in;
}

int GateNetworkSpec::node_count() const {
    int n = 0;
    for (const auto& l : lines) n += l.n;
    return n;
}

namespace {

std::vector<int> line_offsets(const GateNetworkSpec& spec) {
    std::vector<int> off(spec.lines.size() + 1, 0);
    for (std::size_t l = 0; l < spec.lines.size(); ++l)
        off[l + 1] = off[l] + spec.lines[l].n;
    return off;
}

} // namespace

DenseSystem assemble_network(const GateNetworkSpec& spec,
                             const std::vector<std::vector<double>>& memristance,
                             const std::vector<std::optional<double>>& v_in) {
    const std::size_t n_lines = spec.lines.size();
    if (memristance.size() != n_lines || v_in.size() != n_lines)
        throw std::invalid_argument("assemble_network: per-line argument count mismatch");
    const auto off = line_offsets(spec);

    DenseSystem sys;
    sys.n = off.back();
    sys.a.assign(static_cast<std::size_t>(sys.n) * sys.n, 0.0);
    sys.rhs.assign(sys.n, 0.0);
    const auto at = [&](int i, int j) -> double& { return sys.a[static_cast<std::size_t>(i) * sys.n + j]; };

    for (std::size_t l = 0; l < n_lines; ++l) {
        const TridiagonalSystem tri = assemble_line(spec.lines[l], memristance[l], v_in[l]);
        const int base = off[l];
        const int n = spec.lines[l].n;
        for (int i = 0; i < n; ++i) {
            at(base + i, base + i) = tri.diag[i];
            if (i > 0) at(base + i, base + i - 1) = tri.sub[i];
            if (i + 1 < n) at(base + i, base + i + 1) = tri.super[i];
            sys.rhs[base + i] = tri.rhs[i];
        }
    }
    for (const auto& c : spec.couplings) {
        const int ia = off[c.a.line] + c.a.node;
        const int ib = off[c.b.line] + c.b.node;
        const double g = 1.0 / c.r_c;
        at(ia, ia) += g;
        at(ib, ib) += g;
        at(ia, ib) -= g;
        at(ib, ia) -= g;
    }
    for (int i = 0; i < sys.n; ++i) {
        double offsum = 0.0;
        for (int j = 0; j < sys.n; ++j)
            if (j != i) offsum += std::abs(sys.a[static_cast<std::size_t>(i) * sys.n + j]);
        if (!(at(i, i) > offsum))
            throw NumericalError("assemble_network: row " + std::to_string(i) +
                                 " lost strict diagonal dominance");
    }
    return sys;
}

std::vector<double> solve_dense_spd(DenseSystem sys) {
    const int n = sys.n;
    if (n <= 0 || sys.a.size() != static_cast<std::size_t>(n) * n ||
        sys.rhs.size() != static_cast<std::size_t>(n))
        throw NumericalError("dense solve: malformed system");
    std::vector<double>& a = sys.a;
    std::vector<double>& x = sys.rhs;
    std::vector<double> d(n);

    // L D L^T, unit lower triangle stored below the diagonal of `a`.
    for (int j = 0; j < n; ++j) {
        double dj = a[static_cast<std::size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double ljk = a[static_cast<std::size_t>(j) * n + k];
            dj -= ljk * ljk * d[k];
        }
        if (!(dj > 0.0)) throw NumericalError("dense solve: non-positive pivot");
        d[j] = dj;
        for (int i = j + 1; i < n; ++i) {
            double s = a[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= a[static_cast<std::size_t>(i) * n + k] *
                     a[static_cast<std::size_t>(j) * n + k] * d[k];
            a[static_cast<std::size_t>(i) * n + j] = s / dj;
        }
    }
    for (int i = 1; i < n; ++i)
        for (int k = 0; k < i; ++k) x[i] -= a[static_cast<std::size_t>(i) * n + k] * x[k];
    for (int i = 0; i < n; ++i) x[i] /= d[i];
    for (int i = n - 1; i >= 0; --i)
        for (int k = i + 1; k < n; ++k) x[i] -= a[static_cast<std::size_t>(k) * n + i] * x[k];
    return x;
}

NetworkTrace simulate_network(const GateNetworkSpec& spec, const SimOptions& opts) {
    spec.validate();
    if (spec.lines.size() == 1 && spec.couplings.empty()) {
        NetworkTrace tr;
        tr.lines.push_back(simulate_line(spec.lines[0], spec.stimuli[0], spec.t_max, opts));
        return tr;
    }
    if (!(opts.dt > 0.0) || !std::isfinite(opts.dt))
        throw ConfigError("simulate: dt must be positive and finite");
    if (!(spec.t_max >= opts.dt)) throw ConfigError("simulate: t_max must be at least one dt");
    if (opts.sample_stride < 0) throw ConfigError("simulate: sample_stride must be >= 0");

    const double dt = opts.dt;
    const double t_end = spec.t_max;
    const auto n_full = static_cast<long long>(std::floor(t_end / dt + 1e-9));
    const bool partial = t_end - static_cast<double>(n_full) * dt > dt * 1e-9;
    const long long n_steps = n_full + (partial ? 1 : 0);
    const auto step_time = [&](long long k) {
        return (partial && k == n_steps) ? t_end : static_cast<double>(k) * dt;
    };
    // Gate runs are classification runs; a coarser sample cap keeps the
    // per-combination traces small while bracketing preserves event times.
    const long long stride =
        opts.sample_stride > 0 ? opts.sample_stride
                               : std::max<long long>(1, (n_steps + 1 + 4999) / 5000);

    const std::size_t n_lines = spec.lines.size();
    const auto off = line_offsets(spec);
    const int n_total = off.back();

    NetworkTrace trace;
    trace.lines.resize(n_lines);
    for (std::size_t l = 0; l < n_lines; ++l) trace.lines[l].spec = spec.lines[l];

    std::vector<std::vector<double>> m(n_lines);
    for (std::size_t l = 0; l < n_lines; ++l) m[l] = spec.lines[l].initial_memristance;
    std::vector<std::vector<double>> prev_m = m;
    std::vector<double> volts(n_total), prev_v(n_total), rates(n_total);
    std::vector<std::optional<double>> vin(n_lines);
    double prev_t = 0.0;

    long long last_recorded = -1;
    const auto record = [&](long long k, double t, const std::vector<double>& v,
                            const std::vector<std::vector<double>>& mm) {
        for (std::size_t l = 0; l < n_lines; ++l) {
            SimTrace& lt = trace.lines[l];
            lt.times.push_back(t);
            lt.voltages.insert(lt.voltages.end(), v.begin() + off[l], v.begin() + off[l + 1]);
            lt.memristances.insert(lt.memristances.end(), mm[l].begin(), mm[l].end());
        }
        last_recorded = k;
    };

    for (long long k = 0; k <= n_steps; ++k) {
        const double t = step_time(k);
        for (std::size_t l = 0; l < n_lines; ++l) vin[l] = spec.stimuli[l].value_at(t);
        volts = solve_dense_spd(assemble_network(spec, m, vin));
        for (double v : volts)
            if (!std::isfinite(v)) throw NumericalError("network: non-finite node voltage");

        bool crossing = false;
        if (k > 0) {
            for (std::size_t l = 0; l < n_lines && !crossing; ++l) {
                for (int i = 0; i < spec.lines[l].n && !crossing; ++i) {
                    const auto& dev = spec.lines[l].device[i];
                    const int gi = off[l] + i;
                    if (prev_v[gi] < dev.v_t && volts[gi] >= dev.v_t) crossing = true;
                    const double lvl = completion_level(dev);
                    if (prev_m[l][i] < lvl && m[l][i] >= lvl) crossing = true;
                }
            }
            if (crossing && last_recorded != k - 1) record(k - 1, prev_t, prev_v, prev_m);
        }
        if (crossing || k % stride == 0 || k == n_steps) record(k, t, volts, m);
        if (k == n_steps) break;

        bool active = false;
        for (std::size_t l = 0; l < n_lines; ++l) {
            for (int i = 0; i < spec.lines[l].n; ++i) {
                const double rate = memristance_rate(volts[off[l] + i], {m[l][i]}, spec.lines[l].device[i]);
                rates[off[l] + i] = rate;
                if (rate != 0.0) active = true;
            }
        }
        bool settled = true;
        for (std::size_t l = 0; l < n_lines && settled; ++l)
            settled = spec.stimuli[l].settled_by(t);
        if (opts.steady_exit && !active && settled) {
            if (last_recorded != k) record(k, t, volts, m);
            if (t < t_end) record(n_steps, t_end, volts, m);
            break;
        }

        prev_t = t;
        prev_v = volts;
        prev_m = m;
        for (std::size_t l = 0; l < n_lines; ++l)
            for (int i = 0; i < spec.lines[l].n; ++i)
                m[l][i] = std::clamp(m[l][i] + rates[off[l] + i] * dt, spec.lines[l].device[i].r_on,
                                     spec.lines[l].device[i].r_off);
    }
    return trace;
}

namespace {

TruthTableResult classify_impl(const GateNetworkSpec& spec, const SimOptions& opts,
                               std::array<NetworkTrace, 4>* traces) {
    spec.validate();
    const std::vector<int> inputs = spec.input_lines();
    if (inputs.size() != 2)
        throw ConfigError("classify: gate classification needs exactly two input lines");
    for (int l : inputs)
        if (spec.stimuli[l].kind == StimulusKind::none)
            throw ConfigError("classify: input line " + std::to_string(l + 1) +
                              " has no stimulus configured");

    TruthTableResult result;
    for (int a = 0; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) {
            GateNetworkSpec run = spec;
            run.stimuli[inputs[0]] = a ? spec.stimuli[inputs[0]] : Stimulus::open();
            run.stimuli[inputs[1]] =
                b ? spec.stimuli[inputs[1]].delayed_by(spec.input_skew) : Stimulus::open();
            NetworkTrace tr = simulate_network(run, opts);

            const SimTrace& out = tr.lines[spec.output_line];
            const EventLog ev = detect_events(out);
            TruthTableEntry& entry = result.rows[(a ? 2 : 0) + (b ? 1 : 0)];
            entry.completion = ev.completion[out.spec.n - 1];
            entry.switched = entry.completion.has_value();

            if (a == 0 && b == 0) {
                bool quiet = true;
                for (const SimTrace& lt : tr.lines) {
                    for (std::size_t k = 0; k < lt.samples() && quiet; ++k)
                        for (int i = 0; i < lt.spec.n && quiet; ++i)
                            if (lt.voltage(k, i) >= lt.spec.device[i].v_t) quiet = false;
                    if (!quiet) break;
                }
                result.quiescent_metastable = quiet;
            }
            if (traces) (*traces)[(a ? 2 : 0) + (b ? 1 : 0)] = std::move(tr);
        }
    }
    return result;
}

} // namespace

TruthTableResult classify_gate(const GateNetworkSpec& spec, const SimOptions& opts) {
    return classify_impl(spec, opts, nullptr);
}

TruthTableResult classify_gate_traced(const GateNetworkSpec& spec, const SimOptions& opts,
                                      std::array<NetworkTrace, 4>& traces) {
    return classify_impl(spec, opts, &traces);
}

GateKind gate_kind(const TruthTableResult& t) {
    const bool s00 = t.rows[0].switched, s01 = t.rows[1].switched;
    const bool s10 = t.rows[2].switched, s11 = t.rows[3].switched;
    if (s00) return GateKind::mixed;
    if (!s01 && !s10 && !s11) return GateKind::dead;
    if (s01 && s10 && s11) return GateKind::or_gate;
    if (!s01 && !s10 && s11) return GateKind::and_gate;
    return GateKind::mixed;
}

const char* gate_kind_name(GateKind k) {
    switch (k) {
    case GateKind::dead: return "dead";
    case GateKind::or_gate: return "OR";
    case GateKind::and_gate: return "AND";
    case GateKind::mixed: return "mixed";
    }
    return "?";
}

std::vector<std::pair<double, double>> CouplingSweep::runs_of(GateKind k) const {
    std::vector<std::pair<double, double>> runs;
    for (std::size_t i = 0; i < points.size();) {
        if (points[i].kind != k) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < points.size() && points[j + 1].kind == k) ++j;
        runs.emplace_back(points[i].r_c, points[j].r_c);
        i = j + 1;
    }
    return runs;
}

CouplingSweep sweep_coupling(const GateNetworkSpec& spec, double r_c_min, double r_c_max,
                             int steps, const SimOptions& opts) {
    spec.validate();
    if (!(r_c_min > 0.0) || !(r_c_max >= r_c_min))
        throw ConfigError("sweep: need 0 < r_c_min <= r_c_max");
    if (steps < 1 || (steps == 1 && r_c_max != r_c_min))
        throw ConfigError("sweep: steps must be >= 1 (and > 1 to span a range)");

    CouplingSweep sweep;
    sweep.points.reserve(steps);
    for (int k = 0; k < steps; ++k) {
        const double rc = steps == 1
                              ? r_c_min
                              : r_c_min + (r_c_max - r_c_min) * static_cast<double>(k) / (steps - 1);
        GateNetworkSpec point = spec;
        for (auto& c : point.couplings) c.r_c = rc;
        SweepPoint sp;
        sp.r_c = rc;
        sp.table = classify_gate(point, opts);
        sp.kind = gate_kind(sp.table);
        sweep.points.push_back(std::move(sp));
    }
    return sweep;
}

} // namespace mml
