#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mml/analytic.hpp"
#include "mml/gates.hpp"
#include "mml/line.hpp"

namespace mml {

// All file output is deterministic: %.12g numbers, '.' decimal separator,
// '\n' line endings, no timestamps. Identical inputs give identical bytes.
std::string format_double(double x);

// Waveform CSV, header: t,V_1..V_N,RM_1..RM_N
void emit_trace(const SimTrace& trace, const std::filesystem::path& path);

// Events CSV, header: cell,onset,completion (1-based cells, blank = never)
void emit_events(const EventLog& events, const std::filesystem::path& path);

// Closed-form constants + feasibility + delay/duration, plain text.
void emit_analytic_report(const AnalyticSummary& summary, const std::filesystem::path& path);

// Switching transient CSV, header: t,r_m,v_cell,v_ahead,v_behind
void emit_analytic_curve(const AnalyticWaveforms& curve, const std::filesystem::path& path);

struct ComparisonReport {
    std::optional<TauStats> tau_numeric;
    std::optional<double> duration_numeric; // mean completion-onset over interior cells
    std::optional<double> tau_analytic;
    std::optional<double> duration_analytic;
    std::string infeasible_reason;
};

ComparisonReport compare_line(const SimTrace& trace, const EventLog& events,
                              const AnalyticSummary& summary);
void emit_comparison(const ComparisonReport& rep, const std::filesystem::path& path);

void emit_truth_table(const TruthTableResult& table, const GateNetworkSpec& spec,
                      const std::filesystem::path& path);

// Sweep CSV, header: r_c,out_00,out_01,out_10,out_11,t_00,t_01,t_10,t_11,kind
void emit_sweep(const CouplingSweep& sweep, const std::filesystem::path& path);

// Regime windows as text: maximal constant-kind runs in sweep order.
void emit_sweep_windows(const CouplingSweep& sweep, const std::filesystem::path& path);

// Inverse of emit_trace (numeric content only; spec is not stored in CSV).
struct ParsedTrace {
    int n = 0;
    std::vector<double> times;
    std::vector<double> voltages;
    std::vector<double> memristances;
};
ParsedTrace parse_trace(const std::filesystem::path& path);

} // namespace mml
