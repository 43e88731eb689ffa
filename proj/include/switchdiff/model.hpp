#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace switchdiff {

/// Closed parametric drift families. Keeping the drift a closed variant
/// (rather than an arbitrary callback) makes every analytic bound the
/// recurrence theory needs (r_minus, r_plus, M, sup|b|) exact.
enum class DriftKind { Zero, InverseRadial, ConstantRadial };

struct DriftFamily {
    DriftKind kind = DriftKind::Zero;
    double rho = 0.0;  // drift strength, > 0 for non-zero kinds
    int sign = -1;     // -1 inward, +1 outward
    double cap = 1.0;  // radius below which the denominator is capped, > 0

    static DriftFamily zero();
    static DriftFamily inverse_radial(double rho, int sign, double cap);
    static DriftFamily constant_radial(double rho, int sign, double cap);

    /// Scalar s(|x|) with b(x) = s(|x|) * x.
    double radial_scale(double abs_x) const;

    /// b(x), written into `out` (same length as `x`).
    void eval(std::span<const double> x, std::span<double> out) const;

    /// sup_x |b(x)|.
    double sup_norm() const;

    /// sup_{|x| >= cap} x.b(x). Exactly sign*rho for InverseRadial;
    /// +infinity for outward ConstantRadial (no finite bound exists).
    double sup_radial_drift() const;

    /// Radius beyond which sup_radial_drift() is valid (the family's cap).
    double cutoff_radius() const;

    void validate(const std::string& where) const;
};

enum class IntensityKind { Constant, LogisticRadial };

struct IntensityFamily {
    IntensityKind kind = IntensityKind::Constant;
    double lambda = 1.0;  // Constant
    double lambda_lo = 0.0, lambda_hi = 0.0, center = 0.0, slope = 1.0;  // LogisticRadial

    static IntensityFamily constant(double lambda);
    static IntensityFamily logistic_radial(double lambda_lo, double lambda_hi,
                                           double center, double slope);

    double eval(double abs_x) const;
    double lower() const;  // infimum of the family's range (closed form)
    double upper() const;  // supremum

    void validate(const std::string& where) const;
};

enum class DiffusionKind { UnitMatrix, ScalarPerRegime };

struct DiffusionFamily {
    DiffusionKind kind = DiffusionKind::UnitMatrix;
    std::array<double, 2> sigma{1.0, 1.0};

    static DiffusionFamily unit();
    static DiffusionFamily scalar_per_regime(double sigma_0, double sigma_1);

    /// sigma(x, z) = sigma_for(z) * Identity.
    double sigma_for(int regime) const { return sigma[static_cast<std::size_t>(regime)]; }

    /// Tr a(x, z) with a = sigma sigma^T; constant in x.
    double trace_a(int regime, int dim) const;

    void validate(const std::string& where) const;
};

/// Analytic bounds derived from the families. Recomputable from the family
/// parameters; equality is exact.
struct ModelBounds {
    double lam0_lo = 0, lam0_hi = 0;  // range of the regime-0 switching intensity
    double lam1_lo = 0, lam1_hi = 0;
    double r_minus = 0;  // x.b(x,0) <= -r_minus for |x| >= M
    double r_plus = 0;   // x.b(x,1) <= +r_plus for |x| >= M (may be +inf)
    double M = 0;        // radius beyond which the radial drift bounds hold
    double b_norm = 0;   // sup_{x,z} |b(x,z)|
    double trace_a0 = 0, trace_a1 = 0;
    // Quadratic-drift margins: 2 x.b + Tr a <= -R_minus (regime 0), <= +R_plus (regime 1).
    // With the unit diffusion matrix these are 2 r_minus - d and 2 r_plus + d.
    double R_minus = 0, R_plus = 0;
};

struct SwitchingDiffusionModel {
    int dim = 1;
    std::array<DriftFamily, 2> drift{};
    std::array<IntensityFamily, 2> intensity{};
    DiffusionFamily diffusion{};
    ModelBounds bounds{};

    void drift_eval(std::span<const double> x, int z, std::span<double> out) const;
    double intensity_eval(std::span<const double> x, int z) const;
    double intensity_eval_radial(double abs_x, int z) const;

    /// Dominating candidate rate for thinning: max of both intensity sups.
    double lambda_bar() const;
};

/// Validates every family parameter, fills the derived-bounds cache.
/// Throws ParameterError on out-of-range parameters (including intensities
/// that violate strict positivity).
SwitchingDiffusionModel build_model(int dim, DriftFamily drift_0, DriftFamily drift_1,
                                    IntensityFamily intensity_0, IntensityFamily intensity_1,
                                    DiffusionFamily diffusion = DiffusionFamily::unit());

/// Constants of the explicit hitting-time bound. eps and q satisfy the
/// balance relation lam0_hi * (R_plus + eps) = q * lam1_lo * (R_minus - eps);
/// c = min((1-q)/(2q) * (R_plus + eps), (1-q)/2 * (R_minus - eps));
/// C_z0 = 1/c and C_z1 = 1/c + 1/lam1_lo (additive correction for the time
/// spent in regime 1 before the first switch).
struct EpsQC {
    double eps, q, c, C_z0, C_z1;
};

/// Core computation on the quadratic-drift margins R_minus/R_plus.
/// If eps is absent it defaults to 0.1 * R_minus, clipped so that q stays
/// below 1 with a 10% margin. Throws InfeasibilityError when no feasible
/// eps exists (criterion violated) or the requested eps gives q >= 1.
EpsQC compute_eps_q_c_margins(double R_minus, double R_plus, double lam0_hi, double lam1_lo,
                              std::optional<double> eps = std::nullopt);

/// Same computation stated in terms of the unit-diffusion drift bounds:
/// R_minus = 2 r_minus - dim, R_plus = 2 r_plus + dim.
EpsQC compute_eps_q_c(double r_minus, double r_plus, int dim, double lam0_hi, double lam1_lo,
                      std::optional<double> eps = std::nullopt);

struct CriterionReport {
    bool recurrent = false;
    std::string reason;  // which inequality failed; empty when recurrent
    double A = 0;        // lam1_lo * R_minus
    double B = 0;        // lam0_hi * R_plus
    std::optional<double> eps, q, c, C_z0, C_z1;  // filled iff recurrent
};

/// Positive-recurrence check: recurrent iff R_minus > 0 and A > B.
/// When recurrent, fills all bound constants (with the given eps, or the
/// default rule).
CriterionReport check_recurrence_criterion(const SwitchingDiffusionModel& model,
                                           std::optional<double> eps = std::nullopt);

}  // namespace switchdiff
