#include "switchdiff/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "engine.hpp"
#include "parallel.hpp"
#include "switchdiff/errors.hpp"
#include "switchdiff/rng.hpp"
#include "switchdiff/stats.hpp"

namespace switchdiff {

namespace {

constexpr double kZ95 = 1.959963984540054;

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

double theory_bound_at(const CriterionReport& crit, const SwitchingDiffusionModel& model,
                       double abs_x0, int z0) {
    double bound = abs_x0 * abs_x0 / *crit.c;
    if (z0 == 1) bound += 1.0 / model.bounds.lam1_lo;
    return bound;
}

}  // namespace

MCEstimate summarize(std::span<const double> samples, std::int64_t n_censored) {
    RunningStat acc;
    for (double s : samples) acc.add(s);
    MCEstimate e;
    e.mean = acc.mean();
    e.stderr_mean = acc.stderr_mean();
    e.ci95_lo = e.mean - kZ95 * e.stderr_mean;
    e.ci95_hi = e.mean + kZ95 * e.stderr_mean;
    e.n_samples = acc.count() + n_censored;
    e.n_censored = n_censored;
    return e;
}

HitBatch run_hit_batch(const SwitchingDiffusionModel& model, std::span<const double> x0, int z0,
                       double m1, int n_paths, const SimParams& params, double max_time,
                       int workers) {
    std::vector<HitResult> slots(static_cast<std::size_t>(n_paths));
    detail::parallel_for(n_paths, workers, [&](int i) {
        SimParams p = params;
        p.seed = PathRng::derive_seed(params.seed, static_cast<std::uint64_t>(i));
        p.horizon = max_time;
        slots[static_cast<std::size_t>(i)] = simulate_until_hit(model, x0, z0, m1, p, max_time);
    });

    HitBatch batch;
    batch.n_paths = n_paths;
    batch.tau_embedded.reserve(slots.size());
    batch.tau_m1.reserve(slots.size());
    for (const HitResult& r : slots) {
        if (r.tau_embedded)
            batch.tau_embedded.push_back(*r.tau_embedded);
        else
            ++batch.n_censored_embedded;
        if (r.tau_m1)
            batch.tau_m1.push_back(*r.tau_m1);
        else
            ++batch.n_censored_m1;
    }
    return batch;
}

MCEstimate estimate_hitting_moment(const SwitchingDiffusionModel& model,
                                   std::span<const double> x0, int z0, double m1, int n_paths,
                                   const SimParams& params, std::optional<double> max_time,
                                   int workers) {
    if (n_paths < 100) throw ParameterError("estimate_hitting_moment: n_paths must be >= 100");
    CriterionReport crit = check_recurrence_criterion(model);
    if (!crit.recurrent)
        std::cerr << "warning: recurrence criterion unsatisfied (" << crit.reason
                  << "); hitting-time estimates may diverge\n";
    double cap;
    if (max_time) {
        cap = *max_time;
    } else {
        if (!crit.recurrent)
            throw ParameterError("estimate_hitting_moment: max_time is required when the "
                                 "recurrence criterion does not hold");
        double abs_x0 = norm(x0);
        double C = z0 == 1 ? *crit.C_z1 : *crit.C_z0;
        cap = 50.0 * C * (abs_x0 * abs_x0 + 1.0);
    }
    HitBatch batch = run_hit_batch(model, x0, z0, m1, n_paths, params, cap, workers);
    if (batch.tau_embedded.empty())
        throw EstimationError("estimate_hitting_moment: all " + std::to_string(n_paths) +
                              " paths censored at max_time=" + std::to_string(cap));
    return summarize(batch.tau_embedded, batch.n_censored_embedded);
}

BoundReport verify_theorem_bound(const SwitchingDiffusionModel& model,
                                 std::span<const StartPoint> starts, double m1, int n_paths,
                                 const SimParams& params, std::optional<double> max_time,
                                 int workers) {
    CriterionReport crit = check_recurrence_criterion(model);
    if (!crit.recurrent)
        throw InfeasibilityError("verify_theorem_bound: recurrence criterion unsatisfied: " +
                                 crit.reason);
    for (const StartPoint& s : starts) {
        if (!(norm(s.x0) > m1))
            throw ParameterError("verify_theorem_bound: every start must have |x0| > M1");
        if (s.z0 != 0 && s.z0 != 1) throw ParameterError("verify_theorem_bound: z0 must be 0 or 1");
    }

    BoundReport rep;
    rep.constants = crit;
    rep.m1 = m1;
    for (const StartPoint& s : starts) {
        double abs_x0 = norm(s.x0);
        double bound = theory_bound_at(crit, model, abs_x0, s.z0);
        double C = s.z0 == 1 ? *crit.C_z1 : *crit.C_z0;
        double cap = max_time ? *max_time : 50.0 * C * (abs_x0 * abs_x0 + 1.0);
        HitBatch batch = run_hit_batch(model, s.x0, s.z0, m1, n_paths, params, cap, workers);
        if (batch.tau_embedded.empty())
            throw EstimationError("verify_theorem_bound: all paths censored at |x0|=" +
                                  std::to_string(abs_x0));
        BoundRow row;
        row.start = s;
        row.estimate = summarize(batch.tau_embedded, batch.n_censored_embedded);
        row.theory_bound = bound;
        row.satisfied = row.estimate.mean + 3.0 * row.estimate.stderr_mean <= bound;
        row.median = quantile(batch.tau_embedded, 0.5);
        row.q25 = quantile(batch.tau_embedded, 0.25);
        row.q75 = quantile(batch.tau_embedded, 0.75);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

DriftCheckReport lyapunov_drift_check(const SwitchingDiffusionModel& model,
                                      std::span<const double> x0, int z0, int n_paths,
                                      const SimParams& params, int workers) {
    params.validate();
    if (n_paths < 1000) throw ParameterError("lyapunov_drift_check: n_paths must be >= 1000");
    if (z0 != 0 && z0 != 1) throw ParameterError("lyapunov_drift_check: z0 must be 0 or 1");

    // |X|^2 at the first switch, and the switch time, per path.
    struct Slot {
        double sq_change = 0.0;
        double interval = 0.0;
        bool censored = false;
    };
    double abs_x0 = norm(x0);
    std::vector<Slot> slots(static_cast<std::size_t>(n_paths));
    detail::parallel_for(n_paths, workers, [&](int i) {
        std::uint64_t seed = PathRng::derive_seed(params.seed, static_cast<std::uint64_t>(i));
        detail::PathEngine eng(model, x0, z0, params.dt, seed, params.horizon);
        Slot& s = slots[static_cast<std::size_t>(i)];
        s.censored = true;
        while (!eng.done()) {
            auto cp = eng.advance();
            if (cp.switched) {
                s.sq_change = eng.abs_x() * eng.abs_x() - abs_x0 * abs_x0;
                s.interval = cp.t;
                s.censored = false;
                break;
            }
        }
    });

    std::vector<double> sq_changes, intervals;
    sq_changes.reserve(slots.size());
    intervals.reserve(slots.size());
    std::int64_t censored = 0;
    for (const Slot& s : slots) {
        if (s.censored) {
            ++censored;
            continue;
        }
        sq_changes.push_back(s.sq_change);
        intervals.push_back(s.interval);
    }
    if (10 * censored > n_paths)
        throw EstimationError("lyapunov_drift_check: more than 10% of paths censored before "
                              "the first switch; increase horizon");

    DriftCheckReport rep;
    rep.z0 = z0;
    rep.empirical = summarize(sq_changes, censored);
    rep.interval = summarize(intervals, censored);

    CriterionReport crit = check_recurrence_criterion(model);
    if (crit.recurrent) {
        const ModelBounds& b = model.bounds;
        double rhs = z0 == 0 ? -(b.R_minus - *crit.eps) / b.lam0_hi
                             : +(b.R_plus + *crit.eps) / b.lam1_lo;
        rep.theory_rhs = rhs;
        rep.satisfied = rep.empirical.mean <= rhs + 3.0 * rep.empirical.stderr_mean;
    }
    return rep;
}

Histogram estimate_invariant_histogram(const SwitchingDiffusionModel& model,
                                       std::span<const double> x0, int z0, double burn_in,
                                       double horizon, int bins, double box_halfwidth,
                                       const SimParams& params) {
    if (!(horizon > burn_in) || !(burn_in >= 0))
        throw ParameterError("estimate_invariant_histogram: need 0 <= burn_in < horizon");
    if (bins < 1) throw ParameterError("estimate_invariant_histogram: bins must be >= 1");
    if (!(box_halfwidth > 0))
        throw ParameterError("estimate_invariant_histogram: box halfwidth must be > 0");
    CriterionReport crit = check_recurrence_criterion(model);
    if (!crit.recurrent)
        std::cerr << "warning: recurrence criterion unsatisfied (" << crit.reason
                  << "); the occupation histogram may not stabilize\n";

    SimParams p = params;
    p.horizon = horizon;
    p.validate();

    Histogram h;
    h.radial = model.dim > 1;
    h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    double lo = h.radial ? 0.0 : -box_halfwidth;
    double hi = box_halfwidth;
    for (int i = 0; i <= bins; ++i)
        h.bin_edges[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
    std::int64_t out_count = 0;
    std::array<std::int64_t, 2> regime_counts{0, 0};

    detail::PathEngine eng(model, x0, z0, p.dt, p.seed, horizon);
    double width = (hi - lo) / static_cast<double>(bins);
    auto tally = [&](double coord, int z) {
        double pos = (coord - lo) / width;
        if (pos < 0 || pos >= static_cast<double>(bins)) {
            ++out_count;
        } else {
            ++counts[static_cast<std::size_t>(pos)];
        }
        ++regime_counts[static_cast<std::size_t>(z)];
        ++h.n_samples;
    };
    // Grid points in [burn_in, horizon]; the t=0 point counts when burn_in=0.
    if (burn_in <= 0.0) tally(h.radial ? eng.abs_x() : eng.x()[0], eng.z());
    while (!eng.done()) {
        auto cp = eng.advance();
        if (cp.at_grid && cp.t >= burn_in)
            tally(h.radial ? eng.abs_x() : eng.x()[0], eng.z());
    }
    if (h.n_samples == 0)
        throw EstimationError("estimate_invariant_histogram: no grid points after burn_in");

    double total = static_cast<double>(h.n_samples);
    h.masses.resize(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i)
        h.masses[static_cast<std::size_t>(i)] =
            static_cast<double>(counts[static_cast<std::size_t>(i)]) / total;
    h.out_of_range = static_cast<double>(out_count) / total;
    h.regime_fraction = {static_cast<double>(regime_counts[0]) / total,
                         static_cast<double>(regime_counts[1]) / total};
    return h;
}

double tv_distance(const Histogram& h1, const Histogram& h2) {
    if (h1.bin_edges != h2.bin_edges || h1.radial != h2.radial)
        throw ParameterError("tv_distance: histograms have different bins");
    double s = std::abs(h1.out_of_range - h2.out_of_range);
    for (std::size_t i = 0; i < h1.masses.size(); ++i)
        s += std::abs(h1.masses[i] - h2.masses[i]);
    return 0.5 * s;
}

}  // namespace switchdiff
