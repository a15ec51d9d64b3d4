#include "mml/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mml/errors.hpp"

namespace mml {

void HomogeneousLineParams::validate() const {
    if (!(coupling_r > 0.0) || !std::isfinite(coupling_r))
        throw ConfigError("analytic: coupling_r must be positive and finite");
    if (!(bias_r > 0.0) || !std::isfinite(bias_r))
        throw ConfigError("analytic: bias_r must be positive and finite");
    if (!std::isfinite(v_p)) throw ConfigError("analytic: v_p must be finite");
    device.validate();
}

HomogeneousLineParams homogeneous_params(const LineSpec& spec) {
    spec.validate();
    if (!spec.is_uniform())
        throw ConfigError("analytic: the closed forms need a homogeneous line");
    HomogeneousLineParams p;
    p.coupling_r = spec.coupling_r[0];
    p.bias_r = spec.bias_r[0];
    p.v_p = spec.v_p;
    p.device = spec.device[0];
    return p;
}

AsymptoticVoltages asymptotic_voltages(const HomogeneousLineParams& p) {
    AsymptoticVoltages a;
    a.v_on = p.device.r_on * p.v_p / (p.device.r_on + p.bias_r);
    a.v_off = p.device.r_off * p.v_p / (p.device.r_off + p.bias_r);
    return a;
}

NodalAdmittances nodal_admittances(const HomogeneousLineParams& p) {
    NodalAdmittances y;
    y.y_on = 2.0 / p.coupling_r + 1.0 / p.bias_r + 1.0 / p.device.r_on;
    y.y_off = 2.0 / p.coupling_r + 1.0 / p.bias_r + 1.0 / p.device.r_off;
    return y;
}

ReducedCoefficients reduced_coefficients(const HomogeneousLineParams& p) {
    const double r = p.coupling_r, R = p.bias_r;
    const double ron = p.device.r_on, roff = p.device.r_off;
    const auto y = nodal_admittances(p);

    ReducedCoefficients c;
    c.gamma_on = (r * (R + ron) + R * ron) / (r * R * (R + ron) * y.y_on);
    c.gamma_off = (r * (R + roff) + R * roff) / (r * R * (R + roff) * y.y_off);
    c.y1 = 1.0 / R + (r * (R + roff) + R * roff) / (r * r * R * (R + roff) * y.y_off) +
           (r * (R + ron) + R * ron) / (r * r * R * (R + ron) * y.y_on);
    c.y2 = 2.0 / r + 1.0 / R - (1.0 / (r * r)) * (1.0 / y.y_on + 1.0 / y.y_off);
    c.drive = c.y1 * p.v_p - c.y2 * p.device.v_t;
    return c;
}

double v_center(const HomogeneousLineParams& p, double r_m) {
    const auto c = reduced_coefficients(p);
    return p.v_p * c.y1 * r_m / (c.y2 * r_m + 1.0);
}

double v_next(const HomogeneousLineParams& p, double r_m) {
    const auto c = reduced_coefficients(p);
    const auto y = nodal_admittances(p);
    return v_center(p, r_m) / (p.coupling_r * y.y_on) + c.gamma_on * p.v_p;
}

double v_prev(const HomogeneousLineParams& p, double r_m) {
    const auto c = reduced_coefficients(p);
    const auto y = nodal_admittances(p);
    return v_center(p, r_m) / (p.coupling_r * y.y_off) + c.gamma_off * p.v_p;
}

MetastabilityCheck metastability_check(const HomogeneousLineParams& p) {
    p.validate();
    MetastabilityCheck m;
    m.margin = p.device.v_t - asymptotic_voltages(p).v_on;
    m.metastable = m.margin > 0.0;
    m.self_sustaining = v_center(p, p.device.r_on) > p.device.v_t;
    return m;
}

double time_of_memristance(const HomogeneousLineParams& p, double r_m) {
    p.validate();
    const double ron = p.device.r_on, roff = p.device.r_off;
    if (!(r_m >= ron) || !(r_m <= roff))
        throw std::invalid_argument("time_of_memristance: r_m outside [r_on, r_off]");
    const auto c = reduced_coefficients(p);
    const double A = c.drive;
    const double vt = p.device.v_t;
    // v_center(x) - v_t = (A x - v_t) / (y2 x + 1): the cell stays above
    // threshold over [r_on, r_m] iff A*r_on > v_t (A then positive too).
    if (!(A * ron - vt > 0.0))
        throw InfeasibleError("time_of_memristance: switching cell does not stay above threshold");
    const double beta = p.device.beta;
    return (1.0 / beta) * (c.y2 * (r_m - ron) / A +
                           c.y1 * p.v_p / (A * A) * std::log((A * r_m - vt) / (A * ron - vt)));
}

double switching_duration(const HomogeneousLineParams& p) {
    return time_of_memristance(p, p.device.r_off);
}

double rm_at_tau(const HomogeneousLineParams& p) {
    p.validate();
    const double vt = p.device.v_t;
    const double ron = p.device.r_on, roff = p.device.r_off;
    if (v_next(p, ron) >= vt) return ron; // neighbour is already triggered
    if (v_next(p, roff) < vt)
        throw InfeasibleError("rm_at_tau: neighbour never reaches threshold during one switching");
    // v_next(x) = v_t is linear once cleared of its denominator:
    //   v_p*y1*x / ((y2*x + 1) * r * y_on) = v_t - gamma_on*v_p
    const auto c = reduced_coefficients(p);
    const auto y = nodal_admittances(p);
    const double C = p.coupling_r * y.y_on * (vt - c.gamma_on * p.v_p);
    const double den = c.y1 * p.v_p - c.y2 * C;
    if (!(den > 0.0))
        throw InfeasibleError("rm_at_tau: degenerate neighbour-threshold equation");
    return std::clamp(C / den, ron, roff);
}

double cell_delay(const HomogeneousLineParams& p) {
    return time_of_memristance(p, rm_at_tau(p));
}

AnalyticSummary analytic_summary(const HomogeneousLineParams& p) {
    p.validate();
    AnalyticSummary s;
    s.params = p;
    s.asym = asymptotic_voltages(p);
    s.adm = nodal_admittances(p);
    s.coef = reduced_coefficients(p);
    s.meta = metastability_check(p);
    try {
        s.duration = switching_duration(p);
        try {
            s.rm_tau = rm_at_tau(p);
            s.tau = time_of_memristance(p, *s.rm_tau);
        } catch (const InfeasibleError& e) {
            s.infeasible_reason = e.what();
        }
    } catch (const InfeasibleError& e) {
        s.infeasible_reason = e.what();
    }
    return s;
}

AnalyticWaveforms analytic_waveforms(const HomogeneousLineParams& p, int samples) {
    p.validate();
    if (samples < 2) throw ConfigError("analytic: waveform needs at least 2 samples");
    AnalyticWaveforms w;
    const double ron = p.device.r_on, roff = p.device.r_off;
    w.t.reserve(samples);
    w.r_m.reserve(samples);
    w.v_cell.reserve(samples);
    w.v_ahead.reserve(samples);
    w.v_behind.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        const double x = ron + (roff - ron) * static_cast<double>(k) / (samples - 1);
        w.r_m.push_back(x);
        w.t.push_back(time_of_memristance(p, x));
        w.v_cell.push_back(v_center(p, x));
        w.v_ahead.push_back(v_next(p, x));
        w.v_behind.push_back(v_prev(p, x));
    }
    return w;
}

} // namespace mml
