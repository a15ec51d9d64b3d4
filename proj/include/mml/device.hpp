#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "mml/errors.hpp"

namespace mml {

// Threshold-type bipolar memristor.
//
// Units used throughout the library: resistance in kOhm, voltage in V,
// current in mA, time in t0 (the abstract time unit of the model), so
// beta is kOhm/(V*t0).
struct MemristorParams {
    double r_on = 0.0;  // lower memristance bound, kOhm
    double r_off = 0.0; // upper memristance bound, kOhm
    double beta = 0.0;  // switching rate slope, kOhm/(V*t0)
    double v_t = 0.0;   // switching threshold, V

    void validate() const {
        if (!(r_on > 0.0)) throw ConfigError("memristor: r_on must be > 0, got " + std::to_string(r_on));
        if (!(r_off > r_on)) throw ConfigError("memristor: r_off must exceed r_on");
        if (!(beta > 0.0)) throw ConfigError("memristor: beta must be > 0");
        if (!(v_t > 0.0)) throw ConfigError("memristor: v_t must be > 0");
    }
};

struct MemristorState {
    double r_m = 0.0; // instantaneous memristance, kOhm
};

// Instantaneous current through the device (mA) for a voltage drop v (V).
inline double memristor_current(double v, const MemristorState& s) {
    return v / s.r_m;
}

// Memristance level at which a low->high switching counts as complete. An
// Euler step rarely lands exactly on r_off, so completion is called within
// a 1e-6 band of the full span.
inline double completion_level(const MemristorParams& p) {
    return p.r_off - 1e-6 * (p.r_off - p.r_on);
}

// dR_M/dt. Zero inside the |v| < v_t dead zone; above threshold the
// magnitude grows linearly with the overdrive and the sign follows the
// voltage. A rate that would push past an already-reached bound is zeroed
// rather than clamped later, so a bounded state holds exactly.
inline double memristance_rate(double v, const MemristorState& s, const MemristorParams& p) {
    const double mag = std::abs(v);
    if (mag < p.v_t) return 0.0;
    const double rate = (v >= 0.0 ? 1.0 : -1.0) * p.beta * (mag - p.v_t);
    if (rate > 0.0 && s.r_m >= p.r_off) return 0.0;
    if (rate < 0.0 && s.r_m <= p.r_on) return 0.0;
    return rate;
}

// One explicit Euler step of the state equation, clamped to [r_on, r_off].
inline MemristorState advance_memristor(MemristorState s, double v, double dt,
                                        const MemristorParams& p) {
    s.r_m = std::clamp(s.r_m + memristance_rate(v, s, p) * dt, p.r_on, p.r_off);
    return s;
}

} // namespace mml
