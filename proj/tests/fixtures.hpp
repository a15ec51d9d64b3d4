#pragma once

// Shared test fixtures: the baseline homogeneous line used across the suite
// and a sampler of comfortably-feasible random parameter sets.

#include <random>

#include "mml/analytic.hpp"
#include "mml/device.hpp"
#include "mml/line.hpp"

namespace fixtures {

inline mml::MemristorParams base_device() {
    mml::MemristorParams p;
    p.r_on = 5.0;
    p.r_off = 100.0;
    p.beta = 100.0;
    p.v_t = 1.0;
    return p;
}

inline mml::LineSpec base_line(int n = 10) {
    return mml::LineSpec::uniform(n, 50.0, 25.0, 5.0, base_device());
}

inline mml::HomogeneousLineParams base_params() {
    mml::HomogeneousLineParams p;
    p.coupling_r = 50.0;
    p.bias_r = 25.0;
    p.v_p = 5.0;
    p.device = base_device();
    return p;
}

// Random parameters on which every closed form exists, with enough margin
// that quadrature cross-checks stay numerically tame.
inline mml::HomogeneousLineParams random_feasible(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
    for (int attempt = 0; attempt < 10000; ++attempt) {
        mml::HomogeneousLineParams p;
        p.coupling_r = uniform(20.0, 150.0);
        p.bias_r = uniform(8.0, 60.0);
        p.v_p = uniform(3.0, 8.0);
        p.device.r_on = uniform(2.0, 12.0);
        p.device.r_off = uniform(40.0, 250.0);
        p.device.beta = uniform(20.0, 300.0);
        p.device.v_t = uniform(0.3, 2.0);

        const auto meta = mml::metastability_check(p);
        if (!meta.metastable || meta.margin < 1e-3) continue;
        if (mml::v_center(p, p.device.r_on) < p.device.v_t * 1.001) continue;
        if (mml::v_next(p, p.device.r_off) < p.device.v_t * 1.0 + 1e-6) continue;
        return p;
    }
    throw std::runtime_error("random_feasible: sampler failed to find parameters");
}

} // namespace fixtures
