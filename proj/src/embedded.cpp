#include "switchdiff/embedded.hpp"

#include <algorithm>
#include <cmath>

#include "engine.hpp"
#include "parallel.hpp"
#include "switchdiff/errors.hpp"
#include "switchdiff/rng.hpp"
#include "switchdiff/stats.hpp"

namespace switchdiff {

std::vector<SwitchEvent> extract_switch_times(const PathRecord& path) { return path.events; }

std::optional<double> embedded_tau(std::span<const SwitchEvent> events, double m1) {
    for (const auto& e : events) {
        double s = 0.0;
        for (double c : e.x_at) s += c * c;
        if (std::sqrt(s) <= m1) return e.time;
    }
    return std::nullopt;
}

std::vector<double> pool_regime_intervals(const std::vector<std::vector<SwitchEvent>>& batches,
                                          int regime, std::int64_t* excluded_open) {
    std::vector<double> out;
    std::int64_t open = 0;
    for (const auto& events : batches) {
        if (events.empty()) continue;
        double enter_time;
        int current;
        std::size_t first;
        if (events.front().time == 0.0) {
            // T_0 = 0 marker: the path entered regime 0 at time 0.
            enter_time = 0.0;
            current = events.front().new_regime;
            first = 1;
        } else {
            // Started in regime 1; the stretch [0, T_0] is a regime-1
            // sojourn closed by the first recorded switch.
            enter_time = 0.0;
            current = 1 - events.front().new_regime;
            first = 0;
        }
        for (std::size_t i = first; i < events.size(); ++i) {
            if (current == regime) out.push_back(events[i].time - enter_time);
            enter_time = events[i].time;
            current = events[i].new_regime;
        }
        if (current == regime) ++open;  // censored while still in `regime`
    }
    if (excluded_open) *excluded_open = open;
    return out;
}

IntervalStats interval_stats(const std::vector<std::vector<SwitchEvent>>& batches, int regime,
                             const SwitchingDiffusionModel& model) {
    if (regime != 0 && regime != 1) throw ParameterError("interval_stats: regime must be 0 or 1");
    std::int64_t open = 0;
    std::vector<double> durations = pool_regime_intervals(batches, regime, &open);
    if (durations.size() < 2)
        throw EstimationError("interval_stats: need at least 2 closed intervals in regime " +
                              std::to_string(regime));
    RunningStat acc;
    for (double d : durations) acc.add(d);

    IntervalStats st;
    st.regime = regime;
    st.count = acc.count();
    st.mean = acc.mean();
    st.stderr_mean = acc.stderr_mean();
    const IntensityFamily& lam = model.intensity[static_cast<std::size_t>(regime)];
    st.lemma_lo = 1.0 / lam.upper();
    st.lemma_hi = 1.0 / lam.lower();
    st.within_bounds = (st.mean + 3.0 * st.stderr_mean >= st.lemma_lo) &&
                       (st.mean - 3.0 * st.stderr_mean <= st.lemma_hi);
    st.excluded_open = open;
    return st;
}

OccupationReport occupation_time_near_origin(const SwitchingDiffusionModel& model,
                                             std::span<const double> x0, int z0,
                                             double inner_radius, const SimParams& params,
                                             int n_paths, int workers) {
    params.validate();
    if (params.record_stride != 1)
        throw ParameterError("occupation_time_near_origin: record_stride must be 1 "
                             "(the running infimum needs every grid point)");
    if (!(inner_radius > 0)) throw ParameterError("occupation_time_near_origin: M must be > 0");
    double start_radius = 0.0;
    for (double c : x0) start_radius += c * c;
    start_radius = std::sqrt(start_radius);
    if (!(start_radius >= inner_radius))
        throw ParameterError("occupation_time_near_origin: requires |x0| >= M");
    if (n_paths < 100) throw ParameterError("occupation_time_near_origin: n_paths must be >= 100");

    // occupation = T_flip - t_cross, where t_cross is the first grid point
    // with |X| <= M; the running-infimum indicator stays 1 from then on.
    struct Slot {
        double occupation = 0.0;
        bool censored = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_paths));
    detail::parallel_for(n_paths, workers, [&](int i) {
        std::uint64_t seed = PathRng::derive_seed(params.seed, static_cast<std::uint64_t>(i));
        detail::PathEngine eng(model, x0, z0, params.dt, seed, params.horizon);
        double t_cross = -1.0;
        if (eng.abs_x() <= inner_radius) t_cross = 0.0;
        Slot& s = slots[static_cast<std::size_t>(i)];
        s.censored = true;
        while (!eng.done()) {
            auto cp = eng.advance();
            if (cp.at_grid && t_cross < 0 && eng.abs_x() <= inner_radius) t_cross = cp.t;
            if (cp.switched) {
                s.occupation = t_cross >= 0 ? cp.t - t_cross : 0.0;
                s.censored = false;
                break;
            }
        }
    });

    RunningStat acc;
    std::int64_t censored = 0;
    for (const Slot& s : slots) {
        if (s.censored)
            ++censored;
        else
            acc.add(s.occupation);
    }
    if (acc.count() == 0)
        throw EstimationError("occupation_time_near_origin: every path censored before the "
                              "first switch; increase horizon");

    OccupationReport rep;
    rep.inner_radius = inner_radius;
    rep.start_radius = start_radius;
    rep.mean_occupation = acc.mean();
    rep.stderr_mean = acc.stderr_mean();
    rep.n_paths = n_paths;
    rep.n_censored = censored;
    rep.reliability_warning = 2 * censored > n_paths;
    return rep;
}

}  // namespace switchdiff
