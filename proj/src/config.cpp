#include "switchdiff/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "switchdiff/errors.hpp"

namespace switchdiff {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ParameterError("config: field '" + field + "': " + what);
}

void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(where + "." + it.key(), "unknown key");
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    return j.get<int>();
}

std::string get_string(const json& j, const std::string& field) {
    if (!j.is_string()) fail(field, "expected a string");
    return j.get<std::string>();
}

DriftFamily parse_drift(const json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    if (!j.contains("family")) fail(field + ".family", "missing");
    std::string fam = get_string(j.at("family"), field + ".family");
    if (fam == "ZeroDrift") {
        expect_keys(j, {"family"}, field);
        return DriftFamily::zero();
    }
    if (fam != "InverseRadial" && fam != "ConstantRadial")
        fail(field + ".family", "unknown drift family '" + fam + "'");
    expect_keys(j, {"family", "rho", "sign", "cap"}, field);
    for (const char* k : {"rho", "sign", "cap"})
        if (!j.contains(k)) fail(field + "." + k, "missing");
    double rho = get_number(j.at("rho"), field + ".rho");
    int sign = get_int(j.at("sign"), field + ".sign");
    double cap = get_number(j.at("cap"), field + ".cap");
    try {
        return fam == "InverseRadial" ? DriftFamily::inverse_radial(rho, sign, cap)
                                      : DriftFamily::constant_radial(rho, sign, cap);
    } catch (const ParameterError& e) {
        fail(field, e.what());
    }
}

IntensityFamily parse_intensity(const json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    if (!j.contains("family")) fail(field + ".family", "missing");
    std::string fam = get_string(j.at("family"), field + ".family");
    try {
        if (fam == "Constant") {
            expect_keys(j, {"family", "lambda"}, field);
            if (!j.contains("lambda")) fail(field + ".lambda", "missing");
            return IntensityFamily::constant(get_number(j.at("lambda"), field + ".lambda"));
        }
        if (fam == "LogisticRadial") {
            expect_keys(j, {"family", "lambda_lo", "lambda_hi", "center", "slope"}, field);
            for (const char* k : {"lambda_lo", "lambda_hi", "center", "slope"})
                if (!j.contains(k)) fail(field + "." + k, "missing");
            return IntensityFamily::logistic_radial(
                get_number(j.at("lambda_lo"), field + ".lambda_lo"),
                get_number(j.at("lambda_hi"), field + ".lambda_hi"),
                get_number(j.at("center"), field + ".center"),
                get_number(j.at("slope"), field + ".slope"));
        }
    } catch (const ParameterError& e) {
        fail(field, e.what());
    }
    fail(field + ".family", "unknown intensity family '" + fam + "'");
}

DiffusionFamily parse_diffusion(const json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    if (!j.contains("family")) fail(field + ".family", "missing");
    std::string fam = get_string(j.at("family"), field + ".family");
    if (fam == "UnitMatrix") {
        expect_keys(j, {"family"}, field);
        return DiffusionFamily::unit();
    }
    if (fam != "ScalarPerRegime") fail(field + ".family", "unknown diffusion family '" + fam + "'");
    expect_keys(j, {"family", "sigma_0", "sigma_1"}, field);
    for (const char* k : {"sigma_0", "sigma_1"})
        if (!j.contains(k)) fail(field + "." + k, "missing");
    try {
        return DiffusionFamily::scalar_per_regime(get_number(j.at("sigma_0"), field + ".sigma_0"),
                                                  get_number(j.at("sigma_1"), field + ".sigma_1"));
    } catch (const ParameterError& e) {
        fail(field, e.what());
    }
}

SwitchingDiffusionModel parse_model(const json& j, std::vector<std::string>& defaults) {
    if (!j.is_object()) fail("model", "expected an object");
    expect_keys(j, {"dim", "drift_0", "drift_1", "intensity_0", "intensity_1", "diffusion"},
                "model");
    for (const char* k : {"dim", "drift_0", "drift_1", "intensity_0", "intensity_1"})
        if (!j.contains(k)) fail(std::string("model.") + k, "missing");
    int dim = get_int(j.at("dim"), "model.dim");
    DriftFamily d0 = parse_drift(j.at("drift_0"), "model.drift_0");
    DriftFamily d1 = parse_drift(j.at("drift_1"), "model.drift_1");
    IntensityFamily i0 = parse_intensity(j.at("intensity_0"), "model.intensity_0");
    IntensityFamily i1 = parse_intensity(j.at("intensity_1"), "model.intensity_1");
    DiffusionFamily diff;
    if (j.contains("diffusion")) {
        diff = parse_diffusion(j.at("diffusion"), "model.diffusion");
    } else {
        diff = DiffusionFamily::unit();
        defaults.push_back("model.diffusion");
    }
    try {
        return build_model(dim, d0, d1, i0, i1, diff);
    } catch (const ParameterError& e) {
        fail("model", e.what());
    }
}

std::vector<double> parse_point(const json& j, int dim, const std::string& field) {
    if (j.is_number()) {
        // Scalar start broadcasts to (s, 0, ..., 0).
        std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
        x[0] = j.get<double>();
        return x;
    }
    if (!j.is_array()) fail(field, "expected a number or an array of dim numbers");
    if (static_cast<int>(j.size()) != dim) fail(field, "length must equal model.dim");
    std::vector<double> x;
    for (const auto& v : j) x.push_back(get_number(v, field));
    for (double v : x)
        if (!std::isfinite(v)) fail(field, "components must be finite");
    return x;
}

json point_to_json(const std::vector<double>& x) {
    if (x.size() == 1) return x[0];
    return json(x);
}

json drift_to_json(const DriftFamily& f) {
    switch (f.kind) {
        case DriftKind::Zero:
            return {{"family", "ZeroDrift"}};
        case DriftKind::InverseRadial:
            return {{"family", "InverseRadial"}, {"rho", f.rho}, {"sign", f.sign}, {"cap", f.cap}};
        case DriftKind::ConstantRadial:
            return {{"family", "ConstantRadial"}, {"rho", f.rho}, {"sign", f.sign}, {"cap", f.cap}};
    }
    return {};
}

json intensity_to_json(const IntensityFamily& f) {
    if (f.kind == IntensityKind::Constant) return {{"family", "Constant"}, {"lambda", f.lambda}};
    return {{"family", "LogisticRadial"},
            {"lambda_lo", f.lambda_lo},
            {"lambda_hi", f.lambda_hi},
            {"center", f.center},
            {"slope", f.slope}};
}

json diffusion_to_json(const DiffusionFamily& f) {
    if (f.kind == DiffusionKind::UnitMatrix) return {{"family", "UnitMatrix"}};
    return {{"family", "ScalarPerRegime"}, {"sigma_0", f.sigma[0]}, {"sigma_1", f.sigma[1]}};
}

}  // namespace

std::string command_name(Command c) {
    switch (c) {
        case Command::Criterion: return "criterion";
        case Command::Simulate: return "simulate";
        case Command::Hit: return "hit";
        case Command::Sweep: return "sweep";
        case Command::Drift: return "drift";
        case Command::Invariant: return "invariant";
    }
    return "?";
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParameterError("config: top level must be an object");
    expect_keys(j,
                {"command", "model", "x0", "z0", "m1", "n_paths", "dt", "horizon", "max_time",
                 "seed", "record_stride", "starts", "bins", "burn_in", "box_halfwidth", "eps",
                 "dump_paths", "out_dir"},
                "config");
    if (!j.contains("command")) fail("command", "missing");
    if (!j.contains("model")) fail("model", "missing");

    ScenarioConfig cfg;
    std::string cmd = get_string(j.at("command"), "command");
    if (cmd == "criterion") cfg.command = Command::Criterion;
    else if (cmd == "simulate") cfg.command = Command::Simulate;
    else if (cmd == "hit") cfg.command = Command::Hit;
    else if (cmd == "sweep") cfg.command = Command::Sweep;
    else if (cmd == "drift") cfg.command = Command::Drift;
    else if (cmd == "invariant") cfg.command = Command::Invariant;
    else fail("command", "unknown command '" + cmd + "'");

    cfg.model = parse_model(j.at("model"), cfg.applied_defaults);

    auto number_or_default = [&](const char* key, double def) {
        if (j.contains(key)) return get_number(j.at(key), key);
        cfg.applied_defaults.push_back(key);
        return def;
    };
    auto int_or_default = [&](const char* key, int def) {
        if (j.contains(key)) return get_int(j.at(key), key);
        cfg.applied_defaults.push_back(key);
        return def;
    };

    cfg.dt = number_or_default("dt", 1e-3);
    if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) fail("dt", "must be > 0");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            fail("seed", "expected an integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    } else {
        cfg.seed = 0;
        cfg.applied_defaults.push_back("seed");
    }
    cfg.record_stride = int_or_default("record_stride", 1);
    if (cfg.record_stride < 1) fail("record_stride", "must be >= 1");

    const bool needs_x0 = cfg.command == Command::Simulate || cfg.command == Command::Hit ||
                          cfg.command == Command::Drift || cfg.command == Command::Invariant;
    if (needs_x0) {
        if (!j.contains("x0")) fail("x0", "missing");
        if (!j.contains("z0")) fail("z0", "missing");
        cfg.x0 = parse_point(j.at("x0"), cfg.model.dim, "x0");
        cfg.z0 = get_int(j.at("z0"), "z0");
        if (cfg.z0 != 0 && cfg.z0 != 1) fail("z0", "must be 0 or 1");
    } else if (j.contains("x0") || j.contains("z0")) {
        fail(j.contains("x0") ? "x0" : "z0", "not used by command '" + cmd + "'");
    }

    const bool needs_m1 = cfg.command == Command::Hit || cfg.command == Command::Sweep ||
                          cfg.command == Command::Drift;
    const bool allows_m1 = needs_m1 || cfg.command == Command::Invariant;
    if (j.contains("m1") && !allows_m1) fail("m1", "not used by command '" + cmd + "'");
    if (needs_m1 && !j.contains("m1")) fail("m1", "missing");
    if (j.contains("m1")) {
        cfg.m1 = get_number(j.at("m1"), "m1");
        if (!(cfg.m1 > 0)) fail("m1", "must be > 0");
    }

    const bool needs_paths = cfg.command == Command::Hit || cfg.command == Command::Sweep ||
                             cfg.command == Command::Drift;
    if (needs_paths) {
        cfg.n_paths = int_or_default("n_paths", 1000);
    } else if (cfg.command == Command::Simulate) {
        cfg.n_paths = int_or_default("n_paths", 1);
    } else if (j.contains("n_paths")) {
        fail("n_paths", "not used by command '" + cmd + "'");
    }
    if (cfg.n_paths < 1) fail("n_paths", "must be >= 1");

    if (cfg.command == Command::Simulate || cfg.command == Command::Invariant) {
        if (!j.contains("horizon")) fail("horizon", "missing");
        cfg.horizon = get_number(j.at("horizon"), "horizon");
    } else if (cfg.command == Command::Drift) {
        // Censor time for the first-switch interval; generous default from
        // the slowest admissible switching rate of the starting regime.
        double lam_lo = cfg.model.intensity[static_cast<std::size_t>(cfg.z0)].lower();
        cfg.horizon = number_or_default("horizon", 50.0 / lam_lo);
    } else if (j.contains("horizon")) {
        fail("horizon", "not used by command '" + cmd + "'");
    }
    if ((cfg.command == Command::Simulate || cfg.command == Command::Invariant ||
         cfg.command == Command::Drift) &&
        (!(cfg.horizon > 0) || !std::isfinite(cfg.horizon)))
        fail("horizon", "must be > 0 and finite");

    if (j.contains("max_time")) {
        if (cfg.command != Command::Hit && cfg.command != Command::Sweep)
            fail("max_time", "not used by command '" + cmd + "'");
        cfg.max_time = get_number(j.at("max_time"), "max_time");
        if (!(*cfg.max_time > 0)) fail("max_time", "must be > 0");
    }

    if (cfg.command == Command::Sweep) {
        if (!j.contains("starts")) fail("starts", "missing");
        const json& js = j.at("starts");
        if (!js.is_array() || js.empty()) fail("starts", "expected a non-empty array");
        int idx = 0;
        for (const auto& e : js) {
            std::string field = "starts[" + std::to_string(idx++) + "]";
            if (!e.is_object()) fail(field, "expected an object");
            expect_keys(e, {"x0", "z0"}, field);
            if (!e.contains("x0")) fail(field + ".x0", "missing");
            if (!e.contains("z0")) fail(field + ".z0", "missing");
            StartPoint s;
            s.x0 = parse_point(e.at("x0"), cfg.model.dim, field + ".x0");
            s.z0 = get_int(e.at("z0"), field + ".z0");
            if (s.z0 != 0 && s.z0 != 1) fail(field + ".z0", "must be 0 or 1");
            cfg.starts.push_back(std::move(s));
        }
    } else if (j.contains("starts")) {
        fail("starts", "not used by command '" + cmd + "'");
    }

    if (cfg.command == Command::Invariant) {
        cfg.bins = int_or_default("bins", 40);
        if (cfg.bins < 1) fail("bins", "must be >= 1");
        cfg.burn_in = number_or_default("burn_in", cfg.horizon / 10.0);
        if (!(cfg.burn_in >= 0) || cfg.burn_in >= cfg.horizon)
            fail("burn_in", "must satisfy 0 <= burn_in < horizon");
        if (j.contains("box_halfwidth")) {
            cfg.box_halfwidth = get_number(j.at("box_halfwidth"), "box_halfwidth");
            if (!(*cfg.box_halfwidth > 0)) fail("box_halfwidth", "must be > 0");
        } else if (j.contains("m1")) {
            cfg.box_halfwidth = 3.0 * cfg.m1;
            cfg.applied_defaults.push_back("box_halfwidth");
        } else {
            fail("box_halfwidth", "missing (provide box_halfwidth or m1)");
        }
    } else {
        for (const char* k : {"bins", "burn_in", "box_halfwidth"})
            if (j.contains(k)) fail(k, "not used by command '" + cmd + "'");
    }

    if (j.contains("eps")) {
        if (cfg.command != Command::Criterion) fail("eps", "not used by command '" + cmd + "'");
        cfg.eps = get_number(j.at("eps"), "eps");
        if (!(*cfg.eps > 0)) fail("eps", "must be > 0");
    }

    if (j.contains("dump_paths")) {
        if (cfg.command != Command::Simulate)
            fail("dump_paths", "not used by command '" + cmd + "'");
        if (!j.at("dump_paths").is_boolean()) fail("dump_paths", "expected a boolean");
        cfg.dump_paths = j.at("dump_paths").get<bool>();
    } else if (cfg.command == Command::Simulate) {
        cfg.dump_paths = true;
        cfg.applied_defaults.push_back("dump_paths");
    }

    if (j.contains("out_dir")) {
        cfg.out_dir = get_string(j.at("out_dir"), "out_dir");
    } else {
        cfg.out_dir = ".";
        cfg.applied_defaults.push_back("out_dir");
    }
    return cfg;
}

std::string emit_config(const ScenarioConfig& cfg) {
    json j;
    j["command"] = command_name(cfg.command);
    json jm;
    jm["dim"] = cfg.model.dim;
    jm["drift_0"] = drift_to_json(cfg.model.drift[0]);
    jm["drift_1"] = drift_to_json(cfg.model.drift[1]);
    jm["intensity_0"] = intensity_to_json(cfg.model.intensity[0]);
    jm["intensity_1"] = intensity_to_json(cfg.model.intensity[1]);
    jm["diffusion"] = diffusion_to_json(cfg.model.diffusion);
    j["model"] = jm;

    j["dt"] = cfg.dt;
    j["seed"] = cfg.seed;
    j["record_stride"] = cfg.record_stride;
    j["out_dir"] = cfg.out_dir;

    switch (cfg.command) {
        case Command::Criterion:
            if (cfg.eps) j["eps"] = *cfg.eps;
            break;
        case Command::Simulate:
            j["x0"] = point_to_json(cfg.x0);
            j["z0"] = cfg.z0;
            j["horizon"] = cfg.horizon;
            j["n_paths"] = cfg.n_paths;
            j["dump_paths"] = cfg.dump_paths;
            break;
        case Command::Hit:
            j["x0"] = point_to_json(cfg.x0);
            j["z0"] = cfg.z0;
            j["m1"] = cfg.m1;
            j["n_paths"] = cfg.n_paths;
            if (cfg.max_time) j["max_time"] = *cfg.max_time;
            break;
        case Command::Sweep: {
            json js = json::array();
            for (const auto& s : cfg.starts) js.push_back({{"x0", point_to_json(s.x0)}, {"z0", s.z0}});
            j["starts"] = js;
            j["m1"] = cfg.m1;
            j["n_paths"] = cfg.n_paths;
            if (cfg.max_time) j["max_time"] = *cfg.max_time;
            break;
        }
        case Command::Drift:
            j["x0"] = point_to_json(cfg.x0);
            j["z0"] = cfg.z0;
            j["m1"] = cfg.m1;
            j["n_paths"] = cfg.n_paths;
            j["horizon"] = cfg.horizon;
            break;
        case Command::Invariant:
            j["x0"] = point_to_json(cfg.x0);
            j["z0"] = cfg.z0;
            j["horizon"] = cfg.horizon;
            j["bins"] = cfg.bins;
            j["burn_in"] = cfg.burn_in;
            j["box_halfwidth"] = *cfg.box_halfwidth;
            break;
    }
    return j.dump(2);
}

}  // namespace switchdiff
