#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "switchdiff/model.hpp"
#include "switchdiff/simulate.hpp"

namespace switchdiff {

struct MCEstimate {
    double mean = 0.0;
    double stderr_mean = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    std::int64_t n_samples = 0;   // paths launched
    std::int64_t n_censored = 0;  // excluded from the mean
};

/// Normal-approximation summary of the uncensored samples.
MCEstimate summarize(std::span<const double> samples, std::int64_t n_censored);

/// Raw per-path hitting times for one start point; sample i comes from the
/// stream derived from (params.seed, i), so batches are reproducible and
/// independent of worker count and execution order.
struct HitBatch {
    std::vector<double> tau_embedded;  // uncensored only
    std::vector<double> tau_m1;
    std::int64_t n_paths = 0;
    std::int64_t n_censored_embedded = 0;
    std::int64_t n_censored_m1 = 0;
};

HitBatch run_hit_batch(const SwitchingDiffusionModel& model, std::span<const double> x0, int z0,
                       double m1, int n_paths, const SimParams& params, double max_time,
                       int workers = 1);

/// Mean embedded hitting time with confidence interval. If max_time is
/// absent it defaults to 50x the theory bound C_z (|x0|^2 + 1) when the
/// recurrence criterion holds (so censoring is a red flag, not routine);
/// otherwise max_time is required. Warns (without failing) when the
/// criterion does not hold. Throws EstimationError if every path censors.
MCEstimate estimate_hitting_moment(const SwitchingDiffusionModel& model,
                                   std::span<const double> x0, int z0, double m1, int n_paths,
                                   const SimParams& params,
                                   std::optional<double> max_time = std::nullopt,
                                   int workers = 1);

struct StartPoint {
    std::vector<double> x0;
    int z0 = 0;
};

struct BoundRow {
    StartPoint start;
    MCEstimate estimate;       // embedded hitting time
    double theory_bound = 0.0;
    bool satisfied = false;    // mean + 3 se <= theory_bound
    double median = 0.0, q25 = 0.0, q75 = 0.0;  // diagnostics only
};

struct BoundReport {
    std::vector<BoundRow> rows;
    CriterionReport constants;
    double m1 = 0.0;
};

/// Checks the explicit hitting-time bound at each start: the theory bound is
/// |x0|^2 / c for z0 = 0 plus the additive 1/lambda1_lo correction for
/// z0 = 1. Refuses (InfeasibilityError) when the criterion is unsatisfied;
/// every start must have |x0| > m1.
BoundReport verify_theorem_bound(const SwitchingDiffusionModel& model,
                                 std::span<const StartPoint> starts, double m1, int n_paths,
                                 const SimParams& params,
                                 std::optional<double> max_time = std::nullopt, int workers = 1);

struct DriftCheckReport {
    int z0 = 0;
    MCEstimate empirical;              // E[|X_{T_flip}|^2] - |x0|^2
    MCEstimate interval;               // E[T_flip], diagnostic
    std::optional<double> theory_rhs;  // absent when the criterion fails
    std::optional<bool> satisfied;     // empirical.mean <= theory_rhs + 3 se
};

/// Drift of |X|^2 over the first switch interval. For z0 = 0 the bound is
/// -(1/lambda0_hi)(R_minus - eps); for z0 = 1 it is +(1/lambda1_lo)(R_plus + eps).
/// Requires n_paths >= 1000; errors if more than 10% of paths censor before
/// the first switch (params.horizon is the censor time).
DriftCheckReport lyapunov_drift_check(const SwitchingDiffusionModel& model,
                                      std::span<const double> x0, int z0, int n_paths,
                                      const SimParams& params, int workers = 1);

struct Histogram {
    std::vector<double> bin_edges;  // size bins + 1, uniform
    std::vector<double> masses;     // in-range mass per bin
    double out_of_range = 0.0;
    std::int64_t n_samples = 0;
    std::array<double, 2> regime_fraction{0.0, 0.0};  // time fraction per regime
    bool radial = false;  // bins over |x| in [0, L] instead of x in [-L, L]
};

/// Time-average occupation histogram of X on the Euler grid over
/// [burn_in, horizon], from one long trajectory. Bins are uniform over
/// [-box_halfwidth, box_halfwidth] for dim = 1 and radial over
/// [0, box_halfwidth] for dim > 1, with an explicit out-of-range bucket.
Histogram estimate_invariant_histogram(const SwitchingDiffusionModel& model,
                                       std::span<const double> x0, int z0, double burn_in,
                                       double horizon, int bins, double box_halfwidth,
                                       const SimParams& params);

/// Total variation distance between two histograms on the same bins,
/// including the out-of-range bucket. Throws ParameterError on mismatched
/// bin edges.
double tv_distance(const Histogram& h1, const Histogram& h2);

}  // namespace switchdiff
