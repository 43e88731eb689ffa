#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "switchdiff/model.hpp"
#include "switchdiff/simulate.hpp"

namespace switchdiff {

/// The embedded chain observed at switching times, verbatim from the path
/// (simulate_path already prepends the T_0 = 0 convention marker when the
/// path starts in regime 0).
std::vector<SwitchEvent> extract_switch_times(const PathRecord& path);

/// First T_n with |X_{T_n}| <= m1; nullopt if no event qualifies.
std::optional<double> embedded_tau(std::span<const SwitchEvent> events, double m1);

/// Sojourn durations spent in `regime` that end with a switch, pooled from
/// many event lists. For a path started in regime 1 the initial [0, T_0]
/// stretch counts (it is a regime-1 sojourn closed by the switch at T_0,
/// reconstructed from the first event). Open trailing sojourns, i.e. paths
/// censored while in `regime`, are excluded and counted.
std::vector<double> pool_regime_intervals(const std::vector<std::vector<SwitchEvent>>& batches,
                                          int regime, std::int64_t* excluded_open = nullptr);

struct IntervalStats {
    int regime = 0;
    std::int64_t count = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
    double lemma_lo = 0.0;  // 1 / lambda_hi of the regime
    double lemma_hi = 0.0;  // 1 / lambda_lo of the regime
    bool within_bounds = false;  // [mean - 3 se, mean + 3 se] meets [lemma_lo, lemma_hi]
    std::int64_t excluded_open = 0;
};

/// Pools regime sojourns and compares their mean against the interval bounds
/// [1/lambda_hi, 1/lambda_lo] implied by the intensity range.
/// Throws EstimationError with fewer than 2 pooled intervals.
IntervalStats interval_stats(const std::vector<std::vector<SwitchEvent>>& batches, int regime,
                             const SwitchingDiffusionModel& model);

struct OccupationReport {
    double inner_radius = 0.0;  // M
    double start_radius = 0.0;  // |x0|
    double mean_occupation = 0.0;
    double stderr_mean = 0.0;
    std::int64_t n_paths = 0;
    std::int64_t n_censored = 0;  // no switch before params.horizon
    bool reliability_warning = false;  // censored fraction above 50%
};

/// Monte Carlo estimate of the expected time, before the first regime
/// switch, during which the running infimum of |X| has already reached the
/// inner ball of radius M. The indicator is evaluated on the Euler grid, so
/// record_stride must be 1. Requires |x0| > M and n_paths >= 100.
OccupationReport occupation_time_near_origin(const SwitchingDiffusionModel& model,
                                             std::span<const double> x0, int z0,
                                             double inner_radius, const SimParams& params,
                                             int n_paths, int workers = 1);

}  // namespace switchdiff
