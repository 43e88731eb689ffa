#include "switchdiff/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "switchdiff/errors.hpp"

namespace switchdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const std::string& msg) {
    if (!cond) throw ParameterError(msg);
}

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// DriftFamily

DriftFamily DriftFamily::zero() { return DriftFamily{DriftKind::Zero, 0.0, -1, 1.0}; }

DriftFamily DriftFamily::inverse_radial(double rho, int sign, double cap) {
    DriftFamily f{DriftKind::InverseRadial, rho, sign, cap};
    f.validate("drift");
    return f;
}

DriftFamily DriftFamily::constant_radial(double rho, int sign, double cap) {
    DriftFamily f{DriftKind::ConstantRadial, rho, sign, cap};
    f.validate("drift");
    return f;
}

void DriftFamily::validate(const std::string& where) const {
    if (kind == DriftKind::Zero) return;
    require(std::isfinite(rho) && rho > 0, where + ": rho must be > 0");
    require(std::isfinite(cap) && cap > 0, where + ": cap must be > 0");
    require(sign == -1 || sign == 1, where + ": sign must be -1 or +1");
}

double DriftFamily::radial_scale(double abs_x) const {
    switch (kind) {
        case DriftKind::Zero:
            return 0.0;
        case DriftKind::InverseRadial:
            return sign * rho / std::max(abs_x * abs_x, cap * cap);
        case DriftKind::ConstantRadial:
            return sign * rho / std::max(abs_x, cap);
    }
    return 0.0;
}

void DriftFamily::eval(std::span<const double> x, std::span<double> out) const {
    double s = radial_scale(norm(x));
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * x[i];
}

double DriftFamily::sup_norm() const {
    switch (kind) {
        case DriftKind::Zero:
            return 0.0;
        case DriftKind::InverseRadial:
            return rho / cap;  // attained at |x| = cap
        case DriftKind::ConstantRadial:
            return rho;
    }
    return 0.0;
}

double DriftFamily::sup_radial_drift() const {
    switch (kind) {
        case DriftKind::Zero:
            return 0.0;
        case DriftKind::InverseRadial:
            return sign * rho;  // x.b(x) is exactly sign*rho for |x| >= cap
        case DriftKind::ConstantRadial:
            // x.b(x) = sign * rho * |x| on |x| >= cap: bounded only inward.
            return sign < 0 ? -rho * cap : kInf;
    }
    return 0.0;
}

double DriftFamily::cutoff_radius() const { return kind == DriftKind::Zero ? 0.0 : cap; }

// ---------------------------------------------------------------------------
// IntensityFamily

IntensityFamily IntensityFamily::constant(double lambda) {
    IntensityFamily f;
    f.kind = IntensityKind::Constant;
    f.lambda = lambda;
    f.validate("intensity");
    return f;
}

IntensityFamily IntensityFamily::logistic_radial(double lambda_lo, double lambda_hi,
                                                 double center, double slope) {
    IntensityFamily f;
    f.kind = IntensityKind::LogisticRadial;
    f.lambda_lo = lambda_lo;
    f.lambda_hi = lambda_hi;
    f.center = center;
    f.slope = slope;
    f.validate("intensity");
    return f;
}

void IntensityFamily::validate(const std::string& where) const {
    if (kind == IntensityKind::Constant) {
        require(std::isfinite(lambda) && lambda > 0, where + ": lambda must be > 0");
        return;
    }
    require(std::isfinite(lambda_lo) && lambda_lo > 0, where + ": lambda_lo must be > 0");
    require(std::isfinite(lambda_hi) && lambda_hi > lambda_lo,
            where + ": lambda_hi must be > lambda_lo");
    require(std::isfinite(center) && center >= 0, where + ": center must be >= 0");
    require(std::isfinite(slope) && slope > 0, where + ": slope must be > 0");
}

double IntensityFamily::eval(double abs_x) const {
    if (kind == IntensityKind::Constant) return lambda;
    return lambda_lo + (lambda_hi - lambda_lo) / (1.0 + std::exp(-slope * (abs_x - center)));
}

double IntensityFamily::lower() const {
    return kind == IntensityKind::Constant ? lambda : lambda_lo;
}

double IntensityFamily::upper() const {
    return kind == IntensityKind::Constant ? lambda : lambda_hi;
}

// ---------------------------------------------------------------------------
// DiffusionFamily

DiffusionFamily DiffusionFamily::unit() { return DiffusionFamily{}; }

DiffusionFamily DiffusionFamily::scalar_per_regime(double sigma_0, double sigma_1) {
    DiffusionFamily f;
    f.kind = DiffusionKind::ScalarPerRegime;
    f.sigma = {sigma_0, sigma_1};
    f.validate("diffusion");
    return f;
}

void DiffusionFamily::validate(const std::string& where) const {
    if (kind == DiffusionKind::UnitMatrix) return;
    for (double s : sigma)
        require(std::isfinite(s) && s > 0, where + ": sigma must be > 0");
}

double DiffusionFamily::trace_a(int regime, int dim) const {
    double s = sigma_for(regime);
    return static_cast<double>(dim) * s * s;
}

// ---------------------------------------------------------------------------
// SwitchingDiffusionModel

void SwitchingDiffusionModel::drift_eval(std::span<const double> x, int z,
                                         std::span<double> out) const {
    drift[static_cast<std::size_t>(z)].eval(x, out);
}

double SwitchingDiffusionModel::intensity_eval(std::span<const double> x, int z) const {
    return intensity[static_cast<std::size_t>(z)].eval(norm(x));
}

double SwitchingDiffusionModel::intensity_eval_radial(double abs_x, int z) const {
    return intensity[static_cast<std::size_t>(z)].eval(abs_x);
}

double SwitchingDiffusionModel::lambda_bar() const {
    return std::max(bounds.lam0_hi, bounds.lam1_hi);
}

SwitchingDiffusionModel build_model(int dim, DriftFamily drift_0, DriftFamily drift_1,
                                    IntensityFamily intensity_0, IntensityFamily intensity_1,
                                    DiffusionFamily diffusion) {
    require(dim >= 1, "model: dim must be >= 1");
    drift_0.validate("drift_0");
    drift_1.validate("drift_1");
    intensity_0.validate("intensity_0");
    intensity_1.validate("intensity_1");
    diffusion.validate("diffusion");

    SwitchingDiffusionModel m;
    m.dim = dim;
    m.drift = {drift_0, drift_1};
    m.intensity = {intensity_0, intensity_1};
    m.diffusion = diffusion;

    ModelBounds& b = m.bounds;
    b.lam0_lo = intensity_0.lower();
    b.lam0_hi = intensity_0.upper();
    b.lam1_lo = intensity_1.lower();
    b.lam1_hi = intensity_1.upper();
    // Inward margin of the regime-0 drift and outward margin of the
    // regime-1 drift. r_plus is clamped at 0: an inward regime-1 drift
    // satisfies x.b <= +r for every positive r, and the limit r -> 0 gives
    // the sharpest constants.
    b.r_minus = -drift_0.sup_radial_drift();
    b.r_plus = std::max(0.0, drift_1.sup_radial_drift());
    b.M = std::max(drift_0.cutoff_radius(), drift_1.cutoff_radius());
    b.b_norm = std::max(drift_0.sup_norm(), drift_1.sup_norm());
    b.trace_a0 = diffusion.trace_a(0, dim);
    b.trace_a1 = diffusion.trace_a(1, dim);
    b.R_minus = 2.0 * b.r_minus - b.trace_a0;
    b.R_plus = 2.0 * b.r_plus + b.trace_a1;
    return m;
}

// ---------------------------------------------------------------------------
// Recurrence criterion

EpsQC compute_eps_q_c_margins(double R_minus, double R_plus, double lam0_hi, double lam1_lo,
                              std::optional<double> eps_opt) {
    require(lam0_hi > 0 && lam1_lo > 0, "compute_eps_q_c: rates must be > 0");
    double A = lam1_lo * R_minus;
    double B = lam0_hi * R_plus;
    if (!(R_minus > 0) || !(A > B)) {
        std::ostringstream os;
        os << "infeasible: need R_minus > 0 and lam1_lo*R_minus > lam0_hi*R_plus "
           << "(A=" << A << ", B=" << B << ")";
        throw InfeasibilityError(os.str());
    }
    // q(eps) < 1 iff eps < eps_max.
    double eps_max = (A - B) / (lam0_hi + lam1_lo);
    double eps;
    if (eps_opt) {
        eps = *eps_opt;
        require(eps > 0, "compute_eps_q_c: eps must be > 0");
        if (!(eps < R_minus))
            throw InfeasibilityError("infeasible eps: requires eps < R_minus");
        if (!(eps < eps_max))
            throw InfeasibilityError(
                "infeasible eps: q >= 1, requires lam0_hi*(R_plus+eps) < lam1_lo*(R_minus-eps)");
    } else {
        eps = std::min(0.1 * R_minus, 0.9 * eps_max);
    }
    double q = lam0_hi * (R_plus + eps) / (lam1_lo * (R_minus - eps));
    double c = std::min((1.0 - q) / (2.0 * q) * (R_plus + eps),
                        (1.0 - q) / 2.0 * (R_minus - eps));
    return {eps, q, c, 1.0 / c, 1.0 / c + 1.0 / lam1_lo};
}

EpsQC compute_eps_q_c(double r_minus, double r_plus, int dim, double lam0_hi, double lam1_lo,
                      std::optional<double> eps) {
    double d = static_cast<double>(dim);
    return compute_eps_q_c_margins(2.0 * r_minus - d, 2.0 * r_plus + d, lam0_hi, lam1_lo, eps);
}

CriterionReport check_recurrence_criterion(const SwitchingDiffusionModel& model,
                                           std::optional<double> eps) {
    const ModelBounds& b = model.bounds;
    CriterionReport rep;
    rep.A = b.lam1_lo * b.R_minus;
    rep.B = b.lam0_hi * b.R_plus;
    bool unit = model.diffusion.kind == DiffusionKind::UnitMatrix;
    if (!(b.R_minus > 0)) {
        rep.recurrent = false;
        rep.reason = unit ? "2r_- <= d" : "R_- <= 0";
        return rep;
    }
    if (!(rep.A > rep.B)) {
        rep.recurrent = false;
        rep.reason = unit ? "lam1_lo*(2r_- - d) <= lam0_hi*(2r_+ + d)"
                          : "lam1_lo*R_- <= lam0_hi*R_+";
        return rep;
    }
    EpsQC k = compute_eps_q_c_margins(b.R_minus, b.R_plus, b.lam0_hi, b.lam1_lo, eps);
    rep.recurrent = true;
    rep.eps = k.eps;
    rep.q = k.q;
    rep.c = k.c;
    rep.C_z0 = k.C_z0;
    rep.C_z1 = k.C_z1;
    return rep;
}

}  // namespace switchdiff
