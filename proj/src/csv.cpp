#include "mml/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mml/errors.hpp"

namespace mml {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw ConfigError("write failed for " + path.string());
}

std::string opt_str(const std::optional<double>& x) {
    return x ? format_double(*x) : std::string();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

} // namespace

void emit_trace(const SimTrace& trace, const std::filesystem::path& path) {
    auto out = open_out(path);
    const int n = trace.spec.n;
    out << 't';
    for (int i = 1; i <= n; ++i) out << ",V_" << i;
    for (int i = 1; i <= n; ++i) out << ",RM_" << i;
    out << '\n';
    for (std::size_t k = 0; k < trace.samples(); ++k) {
        out << format_double(trace.times[k]);
        for (int i = 0; i < n; ++i) out << ',' << format_double(trace.voltage(k, i));
        for (int i = 0; i < n; ++i) out << ',' << format_double(trace.memristance(k, i));
        out << '\n';
    }
    finish(out, path);
}

void emit_events(const EventLog& events, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "cell,onset,completion\n";
    for (std::size_t i = 0; i < events.onset.size(); ++i)
        out << (i + 1) << ',' << opt_str(events.onset[i]) << ',' << opt_str(events.completion[i])
            << '\n';
    finish(out, path);
}

void emit_analytic_report(const AnalyticSummary& s, const std::filesystem::path& path) {
    auto out = open_out(path);
    const auto& p = s.params;
    out << "closed-form summary (homogeneous line)\n";
    out << "units: kOhm, V, t0; admittances in 1/kOhm\n\n";
    out << "coupling_r = " << format_double(p.coupling_r) << '\n';
    out << "bias_r     = " << format_double(p.bias_r) << '\n';
    out << "v_p        = " << format_double(p.v_p) << '\n';
    out << "r_on       = " << format_double(p.device.r_on) << '\n';
    out << "r_off      = " << format_double(p.device.r_off) << '\n';
    out << "beta       = " << format_double(p.device.beta) << '\n';
    out << "v_t        = " << format_double(p.device.v_t) << "\n\n";
    out << "v_on       = " << format_double(s.asym.v_on) << '\n';
    out << "v_off      = " << format_double(s.asym.v_off) << '\n';
    out << "y_on       = " << format_double(s.adm.y_on) << '\n';
    out << "y_off      = " << format_double(s.adm.y_off) << '\n';
    out << "gamma_on   = " << format_double(s.coef.gamma_on) << '\n';
    out << "gamma_off  = " << format_double(s.coef.gamma_off) << '\n';
    out << "y1         = " << format_double(s.coef.y1) << '\n';
    out << "y2         = " << format_double(s.coef.y2) << '\n';
    out << "drive      = " << format_double(s.coef.drive) << "\n\n";
    out << "metastable      = " << yes_no(s.meta.metastable)
        << " (margin = " << format_double(s.meta.margin) << ")\n";
    out << "self_sustaining = " << yes_no(s.meta.self_sustaining) << '\n';
    const auto opt_or_dash = [](const std::optional<double>& x) {
        return x ? format_double(*x) : std::string("-");
    };
    out << "rm_at_tau  = " << opt_or_dash(s.rm_tau) << '\n';
    out << "tau        = " << opt_or_dash(s.tau) << '\n';
    out << "duration   = " << opt_or_dash(s.duration) << '\n';
    if (!s.infeasible_reason.empty()) out << "infeasible: " << s.infeasible_reason << '\n';
    finish(out, path);
}

void emit_analytic_curve(const AnalyticWaveforms& w, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "t,r_m,v_cell,v_ahead,v_behind\n";
    for (std::size_t k = 0; k < w.t.size(); ++k)
        out << format_double(w.t[k]) << ',' << format_double(w.r_m[k]) << ','
            << format_double(w.v_cell[k]) << ',' << format_double(w.v_ahead[k]) << ','
            << format_double(w.v_behind[k]) << '\n';
    finish(out, path);
}

ComparisonReport compare_line(const SimTrace& trace, const EventLog& events,
                              const AnalyticSummary& summary) {
    ComparisonReport rep;
    rep.tau_numeric = tau_stats(events, trace.spec.n);

    double sum = 0.0;
    int count = 0;
    for (int i = 2; i <= trace.spec.n - 3; ++i) {
        if (events.onset[i] && events.completion[i]) {
            sum += *events.completion[i] - *events.onset[i];
            ++count;
        }
    }
    if (count > 0) rep.duration_numeric = sum / count;

    rep.tau_analytic = summary.tau;
    rep.duration_analytic = summary.duration;
    rep.infeasible_reason = summary.infeasible_reason;
    return rep;
}

void emit_comparison(const ComparisonReport& rep, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "numeric vs closed-form propagation (interior cells)\n\n";
    if (rep.tau_numeric) {
        out << "tau_numeric      = " << format_double(rep.tau_numeric->mean) << " (std "
            << format_double(rep.tau_numeric->stddev) << ", " << rep.tau_numeric->count
            << " spacings)\n";
    } else {
        out << "tau_numeric      = -  (not enough interior onsets)\n";
    }
    out << "duration_numeric = "
        << (rep.duration_numeric ? format_double(*rep.duration_numeric) : std::string("-")) << '\n';
    if (rep.infeasible_reason.empty()) {
        out << "tau_analytic      = " << opt_str(rep.tau_analytic) << '\n';
        out << "duration_analytic = " << opt_str(rep.duration_analytic) << '\n';
        if (rep.tau_numeric && rep.tau_analytic)
            out << "tau rel deviation      = "
                << format_double(std::abs(rep.tau_numeric->mean - *rep.tau_analytic) /
                                 *rep.tau_analytic)
                << '\n';
        if (rep.duration_numeric && rep.duration_analytic)
            out << "duration rel deviation = "
                << format_double(std::abs(*rep.duration_numeric - *rep.duration_analytic) /
                                 *rep.duration_analytic)
                << '\n';
    } else {
        out << "closed form infeasible: " << rep.infeasible_reason << '\n';
    }
    finish(out, path);
}

void emit_truth_table(const TruthTableResult& table, const GateNetworkSpec& spec,
                      const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "gate truth table (horizon " << format_double(spec.t_max) << " t0";
    if (!spec.couplings.empty()) {
        out << ", couplings";
        for (const auto& c : spec.couplings) out << ' ' << format_double(c.r_c);
        out << " kOhm";
    }
    out << ")\n";
    out << "A,B,out,completion\n";
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b) {
            const auto& row = table.row(a, b);
            out << a << ',' << b << ',' << (row.switched ? 1 : 0) << ','
                << opt_str(row.completion) << '\n';
        }
    out << "kind: " << gate_kind_name(gate_kind(table)) << '\n';
    out << "quiescent metastable: " << yes_no(table.quiescent_metastable) << '\n';
    finish(out, path);
}

void emit_sweep(const CouplingSweep& sweep, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "r_c,out_00,out_01,out_10,out_11,t_00,t_01,t_10,t_11,kind\n";
    for (const auto& pt : sweep.points) {
        out << format_double(pt.r_c);
        for (int k = 0; k < 4; ++k) out << ',' << (pt.table.rows[k].switched ? 1 : 0);
        for (int k = 0; k < 4; ++k) out << ',' << opt_str(pt.table.rows[k].completion);
        out << ',' << gate_kind_name(pt.kind) << '\n';
    }
    finish(out, path);
}

void emit_sweep_windows(const CouplingSweep& sweep, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "coupling sweep: " << sweep.points.size() << " points\n";
    out << "regimes in sweep order:\n";
    for (std::size_t i = 0; i < sweep.points.size();) {
        std::size_t j = i;
        while (j + 1 < sweep.points.size() && sweep.points[j + 1].kind == sweep.points[i].kind)
            ++j;
        out << "  [" << format_double(sweep.points[i].r_c) << ", "
            << format_double(sweep.points[j].r_c) << "]  " << gate_kind_name(sweep.points[i].kind)
            << '\n';
        i = j + 1;
    }
    for (GateKind k : {GateKind::or_gate, GateKind::and_gate, GateKind::dead}) {
        const auto runs = sweep.runs_of(k);
        out << gate_kind_name(k) << " window: ";
        if (runs.empty()) {
            out << "none\n";
        } else {
            out << '[' << format_double(runs.front().first) << ", "
                << format_double(runs.back().second) << "] "
                << (runs.size() == 1 ? "(contiguous)" : "(NOT contiguous)") << '\n';
        }
    }
    bool quiet = true;
    for (const auto& pt : sweep.points)
        quiet = quiet && !pt.table.rows[0].switched && pt.table.quiescent_metastable;
    out << "all points quiescent for (0,0): " << yes_no(quiet) << '\n';
    finish(out, path);
}

ParsedTrace parse_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("trace file is empty: " + path.string());

    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    if (cols.size() < 3 || cols[0] != "t" || cols.size() % 2 == 0)
        throw ConfigError("malformed trace header in " + path.string());
    const int n = static_cast<int>((cols.size() - 1) / 2);
    for (int i = 0; i < n; ++i) {
        if (cols[1 + i] != "V_" + std::to_string(i + 1) ||
            cols[1 + n + i] != "RM_" + std::to_string(i + 1))
            throw ConfigError("malformed trace header in " + path.string());
    }

    ParsedTrace tr;
    tr.n = n;
    std::string linebuf;
    std::size_t lineno = 1;
    while (std::getline(in, linebuf)) {
        ++lineno;
        if (linebuf.empty()) continue;
        const char* s = linebuf.c_str();
        std::vector<double> vals;
        vals.reserve(cols.size());
        while (true) {
            char* end = nullptr;
            const double v = std::strtod(s, &end);
            if (end == s)
                throw ConfigError("bad number at " + path.string() + ":" +
                                  std::to_string(lineno));
            vals.push_back(v);
            s = end;
            if (*s == ',') {
                ++s;
            } else if (*s == '\0' || *s == '\r') {
                break;
            } else {
                throw ConfigError("unexpected character at " + path.string() + ":" +
                                  std::to_string(lineno));
            }
        }
        if (vals.size() != cols.size())
            throw ConfigError("wrong column count at " + path.string() + ":" +
                              std::to_string(lineno));
        tr.times.push_back(vals[0]);
        tr.voltages.insert(tr.voltages.end(), vals.begin() + 1, vals.begin() + 1 + n);
        tr.memristances.insert(tr.memristances.end(), vals.begin() + 1 + n, vals.end());
    }
    return tr;
}

} // namespace mml
