#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "switchdiff/model.hpp"

namespace switchdiff {

struct SimParams {
    double dt = 1e-3;
    double horizon = 0.0;  // required > 0
    std::uint64_t seed = 0;
    int record_stride = 1;  // keep every k-th grid point

    void validate() const;  // dt > 0, horizon >= dt, record_stride >= 1
};

struct SwitchEvent {
    std::int64_t n = 0;         // embedded index; starts at 0 at the first time in regime 0
    double time = 0.0;          // T_n
    std::vector<double> x_at;   // X_{T_n}; X is continuous across the switch
    int new_regime = 0;
};

struct PathRecord {
    int dim = 1;
    std::vector<double> times;             // recorded grid instants
    std::vector<double> xs;                // dim-strided, row per instant
    std::vector<int> zs;
    std::vector<SwitchEvent> events;       // includes the t=0 marker when z0=0
    std::vector<double> min_abs_x_running; // prefix min of |X| over recorded instants
    bool censored = false;                 // horizon reached
    std::uint64_t seed = 0;

    std::span<const double> x_row(std::size_t i) const {
        return {xs.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

/// Accept/reject step of the thinning scheme: a candidate generated at the
/// dominating rate lambda_bar is accepted iff u < lambda_current/lambda_bar.
/// lambda_current > lambda_bar means the dominating bound was violated and
/// throws std::logic_error.
bool thinning_accept(double lambda_current, double lambda_bar, double u);

/// One trajectory of (X, Z) over [0, horizon]: Euler-Maruyama for X between
/// switches, switching by thinning of candidates generated at rate
/// lambda_bar = max of both intensity sups. Integration substeps end exactly
/// at candidate times, so accepted switches are not rounded to the grid.
/// Deterministic given (model, x0, z0, params).
/// Throws BlowupError if the state leaves the representable range.
PathRecord simulate_path(const SwitchingDiffusionModel& model, std::span<const double> x0,
                         int z0, const SimParams& params);

struct PathSummary {
    std::int64_t n_events = 0;  // accepted switches (marker excluded)
    std::int64_t steps = 0;     // integration substeps taken
    double final_time = 0.0;
    double min_abs_x = 0.0;     // infimum of |X| over all substep endpoints
};

struct HitResult {
    std::optional<double> tau_m1;        // first checkpoint with |X| <= M1; nullopt = censored
    std::optional<double> tau_embedded;  // first T_n with |X_{T_n}| <= M1
    PathSummary summary;
};

/// Runs the simulate_path dynamics until the first switch time T_n with
/// |X_{T_n}| <= M1 (tau_embedded), or until max_time (censored). tau_m1 is
/// detected at every substep endpoint (grid points and candidate times), so
/// tau_m1 <= tau_embedded holds on every path where both are observed.
/// Conventions: |x0| <= M1 gives tau_m1 = 0; with z0 = 0 it also gives
/// tau_embedded = T_0 = 0. params.horizon is ignored; max_time governs.
HitResult simulate_until_hit(const SwitchingDiffusionModel& model, std::span<const double> x0,
                             int z0, double m1, const SimParams& params, double max_time);

}  // namespace switchdiff
