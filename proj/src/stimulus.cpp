#include "mml/stimulus.hpp"

#include <algorithm>
#include <cmath>

#include "mml/errors.hpp"

namespace mml {

Stimulus Stimulus::open() { return {}; }

Stimulus Stimulus::step_at(double amplitude, double t_start) {
    Stimulus s;
    s.kind = StimulusKind::step;
    s.amplitude = amplitude;
    s.t_start = t_start;
    return s;
}

Stimulus Stimulus::rectangular(double amplitude, double t_start, double t_end) {
    Stimulus s;
    s.kind = StimulusKind::rectangular_pulse;
    s.amplitude = amplitude;
    s.t_start = t_start;
    s.t_end = t_end;
    return s;
}

Stimulus Stimulus::piecewise(std::vector<std::pair<double, double>> segments) {
    Stimulus s;
    s.kind = StimulusKind::piecewise_constant;
    s.segments = std::move(segments);
    return s;
}

void Stimulus::validate() const {
    switch (kind) {
    case StimulusKind::none:
        return;
    case StimulusKind::step:
        if (!std::isfinite(amplitude) || !std::isfinite(t_start))
            throw ConfigError("stimulus: step parameters must be finite");
        return;
    case StimulusKind::rectangular_pulse:
        if (!std::isfinite(amplitude) || !std::isfinite(t_start) || !std::isfinite(t_end))
            throw ConfigError("stimulus: pulse parameters must be finite");
        if (!(t_start < t_end)) throw ConfigError("stimulus: pulse needs t_start < t_end");
        return;
    case StimulusKind::piecewise_constant:
        if (segments.empty()) throw ConfigError("stimulus: piecewise needs at least one segment");
        for (std::size_t i = 0; i < segments.size(); ++i) {
            if (!std::isfinite(segments[i].first) || !std::isfinite(segments[i].second))
                throw ConfigError("stimulus: piecewise segments must be finite");
            if (i > 0 && !(segments[i - 1].first < segments[i].first))
                throw ConfigError("stimulus: piecewise segment times must strictly increase");
        }
        return;
    }
    throw ConfigError("stimulus: unknown kind");
}

std::optional<double> Stimulus::value_at(double t) const {
    switch (kind) {
    case StimulusKind::none:
        return std::nullopt;
    case StimulusKind::step:
        return t >= t_start ? amplitude : 0.0;
    case StimulusKind::rectangular_pulse:
        return (t >= t_start && t < t_end) ? amplitude : 0.0;
    case StimulusKind::piecewise_constant: {
        double v = 0.0;
        for (const auto& [ts, vs] : segments) {
            if (ts > t) break;
            v = vs;
        }
        return v;
    }
    }
    return std::nullopt;
}

bool Stimulus::settled_by(double t) const {
    switch (kind) {
    case StimulusKind::none:
        return true;
    case StimulusKind::step:
        return t >= t_start;
    case StimulusKind::rectangular_pulse:
        return t >= t_end;
    case StimulusKind::piecewise_constant:
        return segments.empty() || t >= segments.back().first;
    }
    return true;
}

Stimulus Stimulus::delayed_by(double delay) const {
    Stimulus s = *this;
    s.t_start += delay;
    s.t_end += delay;
    for (auto& [ts, vs] : s.segments) ts += delay;
    return s;
}

} // namespace mml
