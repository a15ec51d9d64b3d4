#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mml/device.hpp"
#include "mml/line.hpp"

namespace mml {

// Closed-form companion of the simulator for a homogeneous line, built on the
// frozen-neighbour picture: while one cell switches, every cell behind it is
// taken as fully switched (memristance r_off) and every cell ahead as still
// in the low state (r_on). That reduces the line to one ODE per cell and
// yields the per-cell delay and switching duration in closed form.
struct HomogeneousLineParams {
    double coupling_r = 0.0; // series resistor between cells, kOhm
    double bias_r = 0.0;     // per-cell resistor to the supply, kOhm
    double v_p = 0.0;        // supply voltage, V
    MemristorParams device;

    void validate() const; // throws ConfigError
};

// Extract homogeneous parameters from a uniform LineSpec.
HomogeneousLineParams homogeneous_params(const LineSpec& spec);

// Node voltage of an isolated cell whose memristor sits at r_on / r_off.
struct AsymptoticVoltages {
    double v_on = 0.0;
    double v_off = 0.0;
};
AsymptoticVoltages asymptotic_voltages(const HomogeneousLineParams& p);

// Total nodal admittance of a cell in the low / high state.
struct NodalAdmittances {
    double y_on = 0.0;
    double y_off = 0.0;
};
NodalAdmittances nodal_admittances(const HomogeneousLineParams& p);

// Coefficients of the reduced single-cell problem. The switching cell sees
//   v_center(r_m) = v_p * y1 * r_m / (y2 * r_m + 1),
// and `drive` = y1*v_p - y2*v_t is the slope constant whose positivity makes
// switching run to completion.
struct ReducedCoefficients {
    double gamma_on = 0.0;
    double gamma_off = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    double drive = 0.0;
};
ReducedCoefficients reduced_coefficients(const HomogeneousLineParams& p);

// Voltage on the switching cell itself, and on its nearest neighbours ahead
// of (next) and behind (prev) the front, as functions of the switching
// cell's memristance.
double v_center(const HomogeneousLineParams& p, double r_m);
double v_next(const HomogeneousLineParams& p, double r_m);
double v_prev(const HomogeneousLineParams& p, double r_m);

struct MetastabilityCheck {
    bool metastable = false;      // uniform low state holds: v_on < v_t
    double margin = 0.0;          // v_t - v_on
    bool self_sustaining = false; // a cell that starts switching finishes: v_center(r_on) > v_t
};
MetastabilityCheck metastability_check(const HomogeneousLineParams& p);

// Time for the switching cell's memristance to run from r_on to r_m.
// Strictly increasing in r_m, zero at r_on. Throws InfeasibleError when the
// drive cannot keep the cell above threshold, std::invalid_argument when
// r_m lies outside [r_on, r_off].
double time_of_memristance(const HomogeneousLineParams& p, double r_m);

// Full switching duration: time_of_memristance(r_off).
double switching_duration(const HomogeneousLineParams& p);

// Memristance of the switching cell at the moment its downstream neighbour
// reaches threshold (v_next == v_t). Equals r_on when the neighbour is
// already above threshold at the start; throws InfeasibleError when the
// neighbour never gets there.
double rm_at_tau(const HomogeneousLineParams& p);

// Per-cell propagation delay: time_of_memristance(rm_at_tau()).
double cell_delay(const HomogeneousLineParams& p);

// Everything above in one report-friendly bundle. When the closed forms do
// not exist the optionals stay empty and infeasible_reason says why.
struct AnalyticSummary {
    HomogeneousLineParams params;
    AsymptoticVoltages asym;
    NodalAdmittances adm;
    ReducedCoefficients coef;
    MetastabilityCheck meta;
    std::optional<double> rm_tau;
    std::optional<double> tau;
    std::optional<double> duration;
    std::string infeasible_reason;
};
AnalyticSummary analytic_summary(const HomogeneousLineParams& p);

// The switching transient sampled on a uniform memristance grid:
// column k holds t(r_m[k]) and the three node voltages at that instant.
struct AnalyticWaveforms {
    std::vector<double> t;
    std::vector<double> r_m;
    std::vector<double> v_cell;
    std::vector<double> v_ahead;
    std::vector<double> v_behind;
};
AnalyticWaveforms analytic_waveforms(const HomogeneousLineParams& p, int samples);

} // namespace mml
