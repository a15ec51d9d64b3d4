#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mml/device.hpp"
#include "mml/stimulus.hpp"
#include "mml/tridiagonal.hpp"

namespace mml {

// One memristive transmission line of n cells. Cell i (0-based) connects to
// cell i-1 through series resistor coupling_r[i] (cell 0 connects to the
// input terminal), and carries a bias resistor bias_r[i] to the supply v_p
// plus a memristor to ground. The far end is open.
struct LineSpec {
    int n = 0;
    double v_p = 0.0;                        // supply voltage, V
    std::vector<double> coupling_r;          // size n, kOhm
    std::vector<double> bias_r;              // size n, kOhm
    std::vector<MemristorParams> device;     // size n
    std::vector<double> initial_memristance; // size n, kOhm

    // Homogeneous line, memristors initially at r_on (the metastable state).
    static LineSpec uniform(int n, double coupling, double bias, double v_p,
                            const MemristorParams& dev);

    void validate() const; // throws ConfigError
    bool is_uniform() const;
};

// Nodal equations for the quasi-static voltage solve at fixed memristances.
// v_in is the input terminal voltage, or nullopt when the terminal is open
// (the coupling_r[0] branch then drops out entirely).
TridiagonalSystem assemble_line(const LineSpec& spec, std::span<const double> memristance,
                                std::optional<double> v_in);

struct SimOptions {
    double dt = 1e-4;       // Euler step, t0
    int sample_stride = 0;  // record every k-th step; 0 = auto (caps samples at ~1e5)
    bool steady_exit = true; // once nothing can ever change, jump to t_end
};

// Recorded waveform. Samples are strictly increasing in time; on top of the
// stride pattern, both endpoints of any step where a cell crosses its
// switching threshold or completes are recorded, so interpolated event times
// are step-accurate at any stride.
struct SimTrace {
    LineSpec spec;
    std::vector<double> times;
    std::vector<double> voltages;     // row-major, samples() x spec.n
    std::vector<double> memristances; // row-major, samples() x spec.n

    std::size_t samples() const { return times.size(); }
    double voltage(std::size_t k, int cell) const { return voltages[k * spec.n + cell]; }
    double memristance(std::size_t k, int cell) const { return memristances[k * spec.n + cell]; }

    // Linear interpolation; t must lie within [times.front(), times.back()].
    double voltage_at(double t, int cell) const;
};

// March the line from its initial state to t_end. Voltages are resolved
// quasi-statically each step (the nodal system at the current memristances),
// then the memristances take one explicit Euler step. With steady_exit, a
// state where every memristance rate is zero and the stimulus has settled is
// constant forever (the solve has no memory of its own), so the trace jumps
// straight to t_end.
SimTrace simulate_line(const LineSpec& spec, const Stimulus& stim, double t_end,
                       const SimOptions& opts = {});

struct LineState {
    double t = 0.0;
    std::vector<double> memristance;
};

// Single step: solve voltages at state.t, advance memristances by dt,
// bump state.t. Returns the solved (pre-advance) voltages.
std::vector<double> step_line(const LineSpec& spec, LineState& state, const Stimulus& stim,
                              double dt);

// Switching events per cell. onset = first upward crossing of the cell's
// threshold voltage (linear interpolation between samples); completion =
// first time the memristance reaches r_off - 1e-6*(r_off - r_on).
struct EventLog {
    std::vector<std::optional<double>> onset;
    std::vector<std::optional<double>> completion;
};

EventLog detect_events(const SimTrace& trace);

// Mean/std of onset spacing between adjacent interior cells. Interior
// excludes the first two and last two cells, which feel the ends of the
// line. Population standard deviation; nullopt when fewer than one spacing
// is available.
struct TauStats {
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

std::optional<TauStats> tau_stats(const EventLog& events, int n_cells);

// Max over the overlap window of |V_{i+1}(t) - V_i(t - tau)|: how well the
// waveform of interior cell i, delayed by tau, predicts its neighbour.
// Both i and i+1 (0-based) must be interior cells.
double traveling_wave_residual(const SimTrace& trace, double tau, int cell);

} // namespace mml
