#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace mml {

enum class StimulusKind {
    none,               // input terminal left unconnected
    step,               // 0 until t_start, then amplitude forever
    rectangular_pulse,  // amplitude on [t_start, t_end), 0 elsewhere
    piecewise_constant, // explicit (time, value) segments, 0 before the first
};

// Input drive for a line. `none` models a line whose input terminal was never
// wired up: value_at() returns nullopt and the input coupling resistor drops
// out of the nodal equations, which is what leaves an undisturbed line sitting
// exactly at its uniform operating point. The other kinds keep the source
// connected (0 V when inactive).
struct Stimulus {
    StimulusKind kind = StimulusKind::none;
    double amplitude = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<std::pair<double, double>> segments; // piecewise_constant only

    static Stimulus open();
    static Stimulus step_at(double amplitude, double t_start = 0.0);
    static Stimulus rectangular(double amplitude, double t_start, double t_end);
    static Stimulus piecewise(std::vector<std::pair<double, double>> segments);

    void validate() const; // throws ConfigError

    // Source voltage at time t, or nullopt when the terminal is unconnected.
    std::optional<double> value_at(double t) const;

    // True when the drive can no longer change after time t.
    bool settled_by(double t) const;

    // Copy shifted later in time by `delay` (used for skewed gate inputs).
    Stimulus delayed_by(double delay) const;
};

} // namespace mml
