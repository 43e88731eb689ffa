#pragma once

// Internal stepping engine shared by simulate/embedded/estimate. Not part of
// the installed interface.

#include <cmath>
#include <vector>

#include "switchdiff/errors.hpp"
#include "switchdiff/model.hpp"
#include "switchdiff/rng.hpp"
#include "switchdiff/simulate.hpp"

namespace switchdiff::detail {

// Advances one (X, Z) trajectory checkpoint by checkpoint. A checkpoint is a
// grid point k*dt, a thinning candidate time, or the end time, whichever
// comes first; integration substeps end exactly at candidate times. Draw
// order per substep is fixed (dim gaussians, then at candidates one uniform
// for acceptance and one for the next gap), so a path is a pure function of
// (model, x0, z0, dt, seed, end_time).
class PathEngine {
public:
    struct Checkpoint {
        double t = 0.0;
        bool at_grid = false;       // t == k*dt for the next k
        bool switched = false;      // an accepted candidate flipped Z at t
        bool at_end = false;        // t == end_time
        std::int64_t grid_index = 0;  // valid when at_grid
    };

    PathEngine(const SwitchingDiffusionModel& model, std::span<const double> x0, int z0,
               double dt, std::uint64_t seed, double end_time)
        : model_(model),
          x_(x0.begin(), x0.end()),
          z_(z0),
          dt_(dt),
          end_(end_time),
          lambda_bar_(model.lambda_bar()),
          rng_(seed) {
        if (z0 != 0 && z0 != 1) throw ParameterError("simulate: z0 must be 0 or 1");
        if (static_cast<int>(x0.size()) != model.dim)
            throw ParameterError("simulate: x0 dimension does not match the model");
        abs_x_ = norm_of(x_);
        if (!std::isfinite(abs_x_)) throw ParameterError("simulate: x0 must be finite");
        candidate_ = rng_.next_exponential(lambda_bar_);
    }

    // State accessors; valid after construction and after each advance().
    double t() const { return t_; }
    int z() const { return z_; }
    double abs_x() const { return abs_x_; }
    const std::vector<double>& x() const { return x_; }
    std::int64_t steps() const { return steps_; }
    std::int64_t n_switches() const { return n_switches_; }

    bool done() const { return t_ >= end_; }

    Checkpoint advance() {
        double t_grid = static_cast<double>(next_grid_) * dt_;
        double t_next = std::min(std::min(t_grid, candidate_), end_);
        double h = t_next - t_;
        if (h > 0) euler_step(h);
        double prev_t = t_;
        t_ = t_next;
        if (!std::isfinite(abs_x_))
            throw BlowupError("non-finite state during integration", prev_t);

        Checkpoint cp;
        cp.t = t_;
        if (t_next == candidate_) {
            double lam = model_.intensity_eval_radial(abs_x_, z_);
            if (thinning_accept(lam, lambda_bar_, rng_.next_double())) {
                z_ = 1 - z_;
                cp.switched = true;
                ++n_switches_;
            }
            candidate_ = t_ + rng_.next_exponential(lambda_bar_);
        }
        if (t_next == t_grid) {
            cp.at_grid = true;
            cp.grid_index = next_grid_;
            ++next_grid_;
        }
        cp.at_end = t_ >= end_;
        return cp;
    }

private:
    static double norm_of(const std::vector<double>& v) {
        double s = 0.0;
        for (double c : v) s += c * c;
        return std::sqrt(s);
    }

    void euler_step(double h) {
        double scale = model_.drift[static_cast<std::size_t>(z_)].radial_scale(abs_x_);
        double sig = model_.diffusion.sigma_for(z_) * std::sqrt(h);
        double s = 0.0;
        for (double& xi : x_) {
            xi += scale * xi * h + sig * rng_.next_gaussian();
            s += xi * xi;
        }
        abs_x_ = std::sqrt(s);
        ++steps_;
    }

    const SwitchingDiffusionModel& model_;
    std::vector<double> x_;
    int z_;
    double dt_;
    double end_;
    double lambda_bar_;
    PathRng rng_;
    double t_ = 0.0;
    double abs_x_ = 0.0;
    double candidate_ = 0.0;
    std::int64_t next_grid_ = 1;
    std::int64_t steps_ = 0;
    std::int64_t n_switches_ = 0;
};

}  // namespace switchdiff::detail
