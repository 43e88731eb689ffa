#include "switchdiff/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "engine.hpp"
#include "switchdiff/errors.hpp"

namespace switchdiff {

void SimParams::validate() const {
    if (!(dt > 0) || !std::isfinite(dt)) throw ParameterError("params: dt must be > 0");
    if (!(horizon > 0) || !std::isfinite(horizon))
        throw ParameterError("params: horizon must be > 0");
    if (dt > horizon) throw ParameterError("params: dt must be <= horizon");
    if (record_stride < 1) throw ParameterError("params: record_stride must be >= 1");
}

bool thinning_accept(double lambda_current, double lambda_bar, double u) {
    if (!(lambda_current > 0) || !(lambda_bar > 0))
        throw std::logic_error("thinning_accept: rates must be > 0");
    if (lambda_current > lambda_bar)
        throw std::logic_error("thinning_accept: current intensity exceeds dominating bound");
    return u < lambda_current / lambda_bar;
}

PathRecord simulate_path(const SwitchingDiffusionModel& model, std::span<const double> x0,
                         int z0, const SimParams& params) {
    params.validate();
    detail::PathEngine eng(model, x0, z0, params.dt, params.seed, params.horizon);

    PathRecord rec;
    rec.dim = model.dim;
    rec.seed = params.seed;
    std::int64_t n_expected = static_cast<std::int64_t>(params.horizon / params.dt) /
                                  params.record_stride + 2;
    rec.times.reserve(static_cast<std::size_t>(n_expected));
    rec.xs.reserve(static_cast<std::size_t>(n_expected * model.dim));
    rec.zs.reserve(static_cast<std::size_t>(n_expected));
    rec.min_abs_x_running.reserve(static_cast<std::size_t>(n_expected));

    double running_min = eng.abs_x();
    auto record = [&](double t) {
        running_min = std::min(running_min, eng.abs_x());
        rec.times.push_back(t);
        rec.xs.insert(rec.xs.end(), eng.x().begin(), eng.x().end());
        rec.zs.push_back(eng.z());
        rec.min_abs_x_running.push_back(running_min);
    };
    record(0.0);  // grid index 0

    // T_0 = 0 convention: a path started in regime 0 is already at its first
    // embedded time.
    std::int64_t n = 0;
    if (z0 == 0) {
        rec.events.push_back(SwitchEvent{0, 0.0, {x0.begin(), x0.end()}, 0});
        n = 1;
    }

    while (!eng.done()) {
        auto cp = eng.advance();
        if (cp.switched)
            rec.events.push_back(SwitchEvent{n++, cp.t, eng.x(), eng.z()});
        if (cp.at_grid && cp.grid_index % params.record_stride == 0) record(cp.t);
    }
    rec.censored = true;  // ran to the horizon
    return rec;
}

HitResult simulate_until_hit(const SwitchingDiffusionModel& model, std::span<const double> x0,
                             int z0, double m1, const SimParams& params, double max_time) {
    if (!(m1 > 0)) throw ParameterError("simulate_until_hit: M1 must be > 0");
    if (!(max_time > 0) || !std::isfinite(max_time))
        throw ParameterError("simulate_until_hit: max_time must be > 0");
    SimParams p = params;
    p.horizon = max_time;
    p.validate();

    detail::PathEngine eng(model, x0, z0, p.dt, p.seed, max_time);

    HitResult res;
    double min_abs = eng.abs_x();
    if (eng.abs_x() <= m1) {
        res.tau_m1 = 0.0;
        if (z0 == 0) res.tau_embedded = 0.0;  // T_0 = 0 when Z_0 = 0
    }

    while (!res.tau_embedded && !eng.done()) {
        auto cp = eng.advance();
        min_abs = std::min(min_abs, eng.abs_x());
        // |X| is checked at every substep endpoint; embedded times are
        // substep endpoints, so tau_m1 <= tau_embedded on every path.
        if (!res.tau_m1 && eng.abs_x() <= m1) res.tau_m1 = cp.t;
        if (cp.switched && eng.abs_x() <= m1) res.tau_embedded = cp.t;
    }
    res.summary.n_events = eng.n_switches();
    res.summary.steps = eng.steps();
    res.summary.final_time = eng.t();
    res.summary.min_abs_x = min_abs;
    return res;
}

}  // namespace switchdiff
