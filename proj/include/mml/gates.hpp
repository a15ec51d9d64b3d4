#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "mml/line.hpp"
#include "mml/stimulus.hpp"

namespace mml {

struct NodeRef {
    int line = 0;
    int node = 0; // 0-based cell index within the line
};

// Resistive bridge between two cells of (usually different) lines.
struct Coupling {
    NodeRef a;
    NodeRef b;
    double r_c = 0.0; // kOhm
};

// Several lines joined by coupling resistors; one line is designated the
// output. The canonical logic-gate arrangement is two input lines whose last
// cells couple into the first cell of an output line (y_junction below).
struct GateNetworkSpec {
    std::vector<LineSpec> lines;
    std::vector<Stimulus> stimuli; // one per line; the output line's must be `none`
    std::vector<Coupling> couplings;
    int output_line = 0;
    double t_max = 25.0;     // classification horizon, t0
    double input_skew = 0.0; // delay added to the second input's stimulus

    static GateNetworkSpec y_junction(const LineSpec& line, const Stimulus& input_stim,
                                      double r_c, double t_max = 25.0);

    void validate() const; // throws ConfigError
    std::vector<int> input_lines() const;
    int node_count() const;
};

// Dense symmetric nodal system (row-major a, size n*n).
struct DenseSystem {
    int n = 0;
    std::vector<double> a;
    std::vector<double> rhs;
};

// Block assembly: each line contributes its own tridiagonal rows (identical
// to assemble_line), then each coupling adds the usual conductance stencil.
// With no couplings the blocks match the standalone lines exactly.
DenseSystem assemble_network(const GateNetworkSpec& spec,
                             const std::vector<std::vector<double>>& memristance,
                             const std::vector<std::optional<double>>& v_in);

// LDL^T solve (no pivoting) for the symmetric strictly diagonally dominant
// systems assemble_network produces. Consumes the system in place.
std::vector<double> solve_dense_spd(DenseSystem sys);

// Per-line traces on a shared time grid.
struct NetworkTrace {
    std::vector<SimTrace> lines;
};

// Same stepping scheme as simulate_line, with the dense solve in place of
// the tridiagonal one. A single uncoupled line degenerates to simulate_line
// exactly (it is delegated verbatim).
NetworkTrace simulate_network(const GateNetworkSpec& spec, const SimOptions& opts = {});

struct TruthTableEntry {
    bool switched = false;               // output's last cell completed within t_max
    std::optional<double> completion;    // when it did
};

// rows[(a<<1)|b] for inputs (a, b).
struct TruthTableResult {
    std::array<TruthTableEntry, 4> rows;
    bool quiescent_metastable = false; // (0,0) kept every node strictly below threshold

    const TruthTableEntry& row(bool a, bool b) const { return rows[(a ? 2 : 0) + (b ? 1 : 0)]; }
};

// Runs the four input combinations. An input is "0" when its stimulus is
// replaced by an open terminal, "1" when the configured stimulus is applied
// (the second input additionally delayed by input_skew).
TruthTableResult classify_gate(const GateNetworkSpec& spec, const SimOptions& opts = {});

// Same, also handing back the four runs' traces, indexed by (a<<1)|b.
TruthTableResult classify_gate_traced(const GateNetworkSpec& spec, const SimOptions& opts,
                                      std::array<NetworkTrace, 4>& traces);

enum class GateKind { dead, or_gate, and_gate, mixed };

GateKind gate_kind(const TruthTableResult& table);
const char* gate_kind_name(GateKind k);

struct SweepPoint {
    double r_c = 0.0;
    TruthTableResult table;
    GateKind kind = GateKind::dead;
};

// Classification as a function of coupling strength: every coupling in the
// network is set to the same r_c for each point.
struct CouplingSweep {
    std::vector<SweepPoint> points;

    // Maximal runs of consecutive sweep points with the given kind,
    // as [r_c_low, r_c_high] intervals.
    std::vector<std::pair<double, double>> runs_of(GateKind k) const;
};

CouplingSweep sweep_coupling(const GateNetworkSpec& spec, double r_c_min, double r_c_max,
                             int steps, const SimOptions& opts = {});

} // namespace mml
