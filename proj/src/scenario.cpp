#include "switchdiff/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "switchdiff/embedded.hpp"
#include "switchdiff/errors.hpp"
#include "switchdiff/estimate.hpp"
#include "switchdiff/io.hpp"
#include "switchdiff/rng.hpp"
#include "switchdiff/simulate.hpp"
#include "switchdiff/stats.hpp"

namespace switchdiff {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

json criterion_to_json(const CriterionReport& c) {
    json j;
    j["recurrent"] = c.recurrent;
    j["reason"] = c.reason;
    j["A"] = c.A;
    j["B"] = c.B;
    if (c.recurrent) {
        j["eps"] = *c.eps;
        j["q"] = *c.q;
        j["c"] = *c.c;
        j["C_z0"] = *c.C_z0;
        j["C_z1"] = *c.C_z1;
    }
    return j;
}

void write_manifest(const ScenarioConfig& cfg, int workers, const CriterionReport& crit) {
    json j;
    j["artifact"] = {{"name", "switchdiff"}, {"version", "0.1.0"}, {"format", 1}};
    j["command"] = command_name(cfg.command);
    j["workers"] = workers;
    j["config"] = json::parse(emit_config(cfg));
    j["defaults_applied"] = cfg.applied_defaults;
    json jb;
    const ModelBounds& b = cfg.model.bounds;
    jb["lam0_lo"] = b.lam0_lo;
    jb["lam0_hi"] = b.lam0_hi;
    jb["lam1_lo"] = b.lam1_lo;
    jb["lam1_hi"] = b.lam1_hi;
    jb["r_minus"] = b.r_minus;
    jb["r_plus"] = b.r_plus;
    jb["M"] = b.M;
    jb["b_norm"] = b.b_norm;
    jb["R_minus"] = b.R_minus;
    jb["R_plus"] = b.R_plus;
    j["model_bounds"] = jb;
    j["criterion"] = criterion_to_json(crit);
    atomic_write(fs::path(cfg.out_dir) / "manifest.json", j.dump(2) + "\n");
}

void write_csv(const fs::path& path, const std::string& content) { atomic_write(path, content); }

std::string hit_row(double abs_x0, int z0, const MCEstimate& e, double median, double q25,
                    double q75, double theory_bound, bool satisfied) {
    std::ostringstream os;
    os << format_double(abs_x0) << ',' << z0 << ',' << e.n_samples << ',' << e.n_censored << ','
       << format_double(e.mean) << ',' << format_double(e.stderr_mean) << ','
       << format_double(e.ci95_lo) << ',' << format_double(e.ci95_hi) << ','
       << format_double(median) << ',' << format_double(q25) << ',' << format_double(q75) << ','
       << format_double(theory_bound) << ',' << (satisfied ? 1 : 0) << '\n';
    return os.str();
}

constexpr const char* kHitHeader =
    "x0,z0,n,n_censored,mean,stderr,ci_lo,ci_hi,median,q25,q75,theory_bound,satisfied\n";

int run_criterion(const ScenarioConfig& cfg, const CriterionReport& crit) {
    std::ostringstream os;
    os << "recurrent,reason,A,B,eps,q,c,C_z0,C_z1\n";
    os << (crit.recurrent ? 1 : 0) << ',' << '"' << crit.reason << '"' << ','
       << format_double(crit.A) << ',' << format_double(crit.B) << ',';
    if (crit.recurrent) {
        os << format_double(*crit.eps) << ',' << format_double(*crit.q) << ','
           << format_double(*crit.c) << ',' << format_double(*crit.C_z0) << ','
           << format_double(*crit.C_z1) << '\n';
    } else {
        os << ",,,,\n";
    }
    write_csv(fs::path(cfg.out_dir) / "results.csv", os.str());
    std::cerr << "criterion: " << (crit.recurrent ? "recurrent" : "not recurrent");
    if (!crit.recurrent) std::cerr << " (" << crit.reason << ")";
    std::cerr << "\n";
    return kExitOk;
}

int run_simulate(const ScenarioConfig& cfg) {
    SimParams params{cfg.dt, cfg.horizon, cfg.seed, cfg.record_stride};
    std::ostringstream summary;
    summary << "path_index,seed,n_events,censored,final_time,min_abs_x\n";
    for (int i = 0; i < cfg.n_paths; ++i) {
        SimParams p = params;
        p.seed = PathRng::derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        PathRecord rec = simulate_path(cfg.model, cfg.x0, cfg.z0, p);

        std::int64_t n_switches = static_cast<std::int64_t>(rec.events.size());
        if (!rec.events.empty() && rec.events.front().time == 0.0) --n_switches;  // marker
        summary << i << ',' << p.seed << ',' << n_switches << ',' << (rec.censored ? 1 : 0) << ','
                << format_double(rec.times.empty() ? 0.0 : rec.times.back()) << ','
                << format_double(rec.min_abs_x_running.empty() ? 0.0
                                                               : rec.min_abs_x_running.back())
                << '\n';
        if (!cfg.dump_paths) continue;

        std::ostringstream pf;
        pf << "time";
        for (int dcol = 1; dcol <= cfg.model.dim; ++dcol) pf << ",x_" << dcol;
        pf << ",z\n";
        for (std::size_t k = 0; k < rec.times.size(); ++k) {
            pf << format_double(rec.times[k]);
            for (double v : rec.x_row(k)) pf << ',' << format_double(v);
            pf << ',' << rec.zs[k] << '\n';
        }
        write_csv(fs::path(cfg.out_dir) / ("path_" + std::to_string(i) + ".csv"), pf.str());

        std::ostringstream ef;
        ef << "n,T_n";
        for (int dcol = 1; dcol <= cfg.model.dim; ++dcol) ef << ",x_" << dcol;
        ef << ",new_regime\n";
        for (const SwitchEvent& e : rec.events) {
            ef << e.n << ',' << format_double(e.time);
            for (double v : e.x_at) ef << ',' << format_double(v);
            ef << ',' << e.new_regime << '\n';
        }
        write_csv(fs::path(cfg.out_dir) / ("events_" + std::to_string(i) + ".csv"), ef.str());
    }
    write_csv(fs::path(cfg.out_dir) / "results.csv", summary.str());
    return kExitOk;
}

int run_hit(const ScenarioConfig& cfg, const CriterionReport& crit, int workers) {
    SimParams params{cfg.dt, 1.0, cfg.seed, cfg.record_stride};
    double abs_x0 = norm(cfg.x0);
    double cap;
    if (cfg.max_time) {
        cap = *cfg.max_time;
    } else if (crit.recurrent) {
        double C = cfg.z0 == 1 ? *crit.C_z1 : *crit.C_z0;
        cap = 50.0 * C * (abs_x0 * abs_x0 + 1.0);
    } else {
        throw ParameterError("hit: max_time is required when the criterion does not hold");
    }
    if (!crit.recurrent)
        std::cerr << "warning: recurrence criterion unsatisfied (" << crit.reason << ")\n";

    HitBatch batch =
        run_hit_batch(cfg.model, cfg.x0, cfg.z0, cfg.m1, cfg.n_paths, params, cap, workers);
    if (batch.tau_embedded.empty())
        throw EstimationError("hit: all " + std::to_string(cfg.n_paths) +
                              " paths censored at max_time=" + std::to_string(cap));
    MCEstimate est = summarize(batch.tau_embedded, batch.n_censored_embedded);
    double bound = std::numeric_limits<double>::quiet_NaN();
    bool satisfied = false;
    if (crit.recurrent) {
        bound = abs_x0 * abs_x0 / *crit.c + (cfg.z0 == 1 ? 1.0 / cfg.model.bounds.lam1_lo : 0.0);
        satisfied = est.mean + 3.0 * est.stderr_mean <= bound;
    }
    std::string csv = std::string(kHitHeader) +
                      hit_row(abs_x0, cfg.z0, est, quantile(batch.tau_embedded, 0.5),
                              quantile(batch.tau_embedded, 0.25),
                              quantile(batch.tau_embedded, 0.75), bound, satisfied);
    write_csv(fs::path(cfg.out_dir) / "results.csv", csv);
    return kExitOk;
}

int run_sweep(const ScenarioConfig& cfg, int workers) {
    SimParams params{cfg.dt, 1.0, cfg.seed, cfg.record_stride};
    BoundReport rep = verify_theorem_bound(cfg.model, cfg.starts, cfg.m1, cfg.n_paths, params,
                                           cfg.max_time, workers);
    std::string csv(kHitHeader);
    for (const BoundRow& r : rep.rows)
        csv += hit_row(norm(r.start.x0), r.start.z0, r.estimate, r.median, r.q25, r.q75,
                       r.theory_bound, r.satisfied);
    write_csv(fs::path(cfg.out_dir) / "results.csv", csv);
    return kExitOk;
}

int run_drift(const ScenarioConfig& cfg, int workers) {
    if (!(norm(cfg.x0) > cfg.m1))
        throw ParameterError("drift: requires |x0| > m1");
    SimParams params{cfg.dt, cfg.horizon, cfg.seed, cfg.record_stride};
    DriftCheckReport rep =
        lyapunov_drift_check(cfg.model, cfg.x0, cfg.z0, cfg.n_paths, params, workers);
    std::ostringstream os;
    os << "x0,z0,n,n_censored,drift_mean,drift_stderr,theory_rhs,satisfied,interval_mean,"
          "interval_stderr\n";
    os << format_double(norm(cfg.x0)) << ',' << cfg.z0 << ',' << rep.empirical.n_samples << ','
       << rep.empirical.n_censored << ',' << format_double(rep.empirical.mean) << ','
       << format_double(rep.empirical.stderr_mean) << ','
       << (rep.theory_rhs ? format_double(*rep.theory_rhs) : "") << ','
       << (rep.satisfied ? (*rep.satisfied ? "1" : "0") : "") << ','
       << format_double(rep.interval.mean) << ',' << format_double(rep.interval.stderr_mean)
       << '\n';
    write_csv(fs::path(cfg.out_dir) / "results.csv", os.str());
    return kExitOk;
}

int run_invariant(const ScenarioConfig& cfg) {
    SimParams params{cfg.dt, cfg.horizon, cfg.seed, 1};
    Histogram h = estimate_invariant_histogram(cfg.model, cfg.x0, cfg.z0, cfg.burn_in,
                                               cfg.horizon, cfg.bins, *cfg.box_halfwidth, params);
    std::ostringstream hist;
    hist << "bin_lo,bin_hi,mass\n";
    for (std::size_t i = 0; i < h.masses.size(); ++i)
        hist << format_double(h.bin_edges[i]) << ',' << format_double(h.bin_edges[i + 1]) << ','
             << format_double(h.masses[i]) << '\n';
    write_csv(fs::path(cfg.out_dir) / "histogram.csv", hist.str());

    std::ostringstream os;
    os << "n_samples,out_of_range,regime_frac_0,regime_frac_1,bins,box_halfwidth,radial\n";
    os << h.n_samples << ',' << format_double(h.out_of_range) << ','
       << format_double(h.regime_fraction[0]) << ',' << format_double(h.regime_fraction[1]) << ','
       << h.masses.size() << ',' << format_double(*cfg.box_halfwidth) << ','
       << (h.radial ? 1 : 0) << '\n';
    write_csv(fs::path(cfg.out_dir) / "results.csv", os.str());
    return kExitOk;
}

}  // namespace

int run_scenario(const ScenarioConfig& cfg, int workers) {
    try {
        fs::create_directories(cfg.out_dir);
        CriterionReport crit = check_recurrence_criterion(
            cfg.model, cfg.command == Command::Criterion ? cfg.eps : std::nullopt);
        write_manifest(cfg, workers, crit);
        switch (cfg.command) {
            case Command::Criterion: return run_criterion(cfg, crit);
            case Command::Simulate: return run_simulate(cfg);
            case Command::Hit: return run_hit(cfg, crit, workers);
            case Command::Sweep: return run_sweep(cfg, workers);
            case Command::Drift: return run_drift(cfg, workers);
            case Command::Invariant: return run_invariant(cfg);
        }
        return kExitOk;
    } catch (const InfeasibilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCriterionRefused;
    } catch (const EstimationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimationFailure;
    } catch (const BlowupError& e) {
        std::cerr << "error: " << e.what() << " (last valid time " << e.last_valid_time << ")\n";
        return kExitNumericalBlowup;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParseError;
    }
}

}  // namespace switchdiff
