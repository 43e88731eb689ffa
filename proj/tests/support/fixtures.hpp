#pragma once

// Shared test fixtures and independent oracles. The oracles deliberately use
// their own integration loop and <random> engines so they share nothing with
// the library path they check.

#include <cmath>
#include <random>
#include <vector>

#include "switchdiff/model.hpp"

namespace testsupport {

/// d=1 reference model: inward drift of strength 2 in regime 0, outward of
/// strength 1 in regime 1, both capped at radius 1, switching rates 0.5 / 2.
inline switchdiff::SwitchingDiffusionModel reference_model() {
    using namespace switchdiff;
    return build_model(1, DriftFamily::inverse_radial(2.0, -1, 1.0),
                       DriftFamily::inverse_radial(1.0, +1, 1.0),
                       IntensityFamily::constant(0.5), IntensityFamily::constant(2.0));
}

/// Plain single-regime Euler-Maruyama hitting time: fixed-grid steps of the
/// 1-d SDE dX = b(X) dt + sigma dW, stopping at the first grid point with
/// |X| <= m1, or at max_time (returns -1).
template <typename DriftFn>
double single_regime_hit_time(DriftFn&& b, double sigma, double x0, double m1, double dt,
                              double max_time, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    double x = x0;
    double sqdt = std::sqrt(dt);
    if (std::abs(x) <= m1) return 0.0;
    long n_steps = static_cast<long>(max_time / dt);
    for (long k = 1; k <= n_steps; ++k) {
        x += b(x) * dt + sigma * sqdt * normal(rng);
        if (std::abs(x) <= m1) return static_cast<double>(k) * dt;
    }
    return -1.0;
}

}  // namespace testsupport
