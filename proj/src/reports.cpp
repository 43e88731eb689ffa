#include "switchdiff/reports.hpp"

#include <json.hpp>

namespace switchdiff {

using nlohmann::json;

namespace {

json criterion_json(const CriterionReport& rep) {
    json j;
    j["recurrent"] = rep.recurrent;
    j["reason"] = rep.reason;
    j["A"] = rep.A;
    j["B"] = rep.B;
    if (rep.recurrent) {
        j["eps"] = *rep.eps;
        j["q"] = *rep.q;
        j["c"] = *rep.c;
        j["C_z0"] = *rep.C_z0;
        j["C_z1"] = *rep.C_z1;
    }
    return j;
}

json estimate_json(const MCEstimate& e) {
    return {{"mean", e.mean},       {"stderr", e.stderr_mean}, {"ci95_lo", e.ci95_lo},
            {"ci95_hi", e.ci95_hi}, {"n_samples", e.n_samples}, {"n_censored", e.n_censored}};
}

}  // namespace

std::string to_json_string(const CriterionReport& rep) { return criterion_json(rep).dump(); }

std::string to_json_string(const MCEstimate& est) { return estimate_json(est).dump(); }

std::string to_json_string(const IntervalStats& stats) {
    json j{{"regime", stats.regime},
           {"count", stats.count},
           {"mean", stats.mean},
           {"stderr", stats.stderr_mean},
           {"lemma_lo", stats.lemma_lo},
           {"lemma_hi", stats.lemma_hi},
           {"within_bounds", stats.within_bounds},
           {"excluded_open", stats.excluded_open}};
    return j.dump();
}

std::string to_json_string(const OccupationReport& rep) {
    json j{{"inner_radius", rep.inner_radius},
           {"start_radius", rep.start_radius},
           {"mean_occupation", rep.mean_occupation},
           {"stderr", rep.stderr_mean},
           {"n_paths", rep.n_paths},
           {"n_censored", rep.n_censored},
           {"reliability_warning", rep.reliability_warning}};
    return j.dump();
}

std::string to_json_string(const DriftCheckReport& rep) {
    json j;
    j["z0"] = rep.z0;
    j["empirical"] = estimate_json(rep.empirical);
    j["interval"] = estimate_json(rep.interval);
    if (rep.theory_rhs) j["theory_rhs"] = *rep.theory_rhs;
    if (rep.satisfied) j["satisfied"] = *rep.satisfied;
    return j.dump();
}

std::string to_json_string(const BoundReport& rep) {
    json rows = json::array();
    for (const BoundRow& r : rep.rows) {
        json jr;
        jr["x0"] = r.start.x0;
        jr["z0"] = r.start.z0;
        jr["estimate"] = estimate_json(r.estimate);
        jr["theory_bound"] = r.theory_bound;
        jr["satisfied"] = r.satisfied;
        jr["median"] = r.median;
        jr["q25"] = r.q25;
        jr["q75"] = r.q75;
        rows.push_back(jr);
    }
    json j{{"m1", rep.m1}, {"constants", criterion_json(rep.constants)}, {"rows", rows}};
    return j.dump();
}

std::string to_json_string(const Histogram& hist) {
    json j{{"bin_edges", hist.bin_edges},
           {"masses", hist.masses},
           {"out_of_range", hist.out_of_range},
           {"n_samples", hist.n_samples},
           {"regime_fraction", hist.regime_fraction},
           {"radial", hist.radial}};
    return j.dump();
}

}  // namespace switchdiff
