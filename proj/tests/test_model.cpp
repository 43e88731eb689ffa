#include <doctest.h>

#include <cmath>
#include <limits>

#include "support/fixtures.hpp"
#include "switchdiff/errors.hpp"
#include "switchdiff/model.hpp"
#include "switchdiff/rng.hpp"

using namespace switchdiff;

TEST_CASE("drift family formulas") {
    // b = sign * rho * x / max(|x|^2, cap^2)
    DriftFamily f = DriftFamily::inverse_radial(1.0, -1, 1.0);
    std::vector<double> x{2.0, 0.0}, out(2);
    f.eval(x, out);
    CHECK(out[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(out[1] == 0.0);

    // cap active below radius 1: -2 * 0.5 / max(0.25, 1) = -1
    DriftFamily g = DriftFamily::inverse_radial(2.0, -1, 1.0);
    std::vector<double> x1{0.5}, out1(1);
    g.eval(x1, out1);
    CHECK(out1[0] == doctest::Approx(-1.0).epsilon(1e-15));

    DriftFamily z = DriftFamily::zero();
    std::vector<double> xz{3.0, -4.0}, outz(2);
    z.eval(xz, outz);
    CHECK(outz[0] == 0.0);
    CHECK(outz[1] == 0.0);

    DriftFamily c = DriftFamily::constant_radial(1.5, -1, 2.0);
    // |x| = 4 >= cap: b = -1.5 * x / 4
    std::vector<double> xc{4.0}, outc(1);
    c.eval(xc, outc);
    CHECK(outc[0] == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(c.sup_norm() == doctest::Approx(1.5));
    CHECK(c.sup_radial_drift() == doctest::Approx(-3.0));  // -rho*cap at |x|=cap
    CHECK(DriftFamily::constant_radial(1.5, +1, 2.0).sup_radial_drift() ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("drift family parameter validation") {
    CHECK_THROWS_AS(DriftFamily::inverse_radial(0.0, -1, 1.0), ParameterError);
    CHECK_THROWS_AS(DriftFamily::inverse_radial(-1.0, -1, 1.0), ParameterError);
    CHECK_THROWS_AS(DriftFamily::inverse_radial(1.0, -1, 0.0), ParameterError);
    CHECK_THROWS_AS(DriftFamily::inverse_radial(1.0, 2, 1.0), ParameterError);
}

TEST_CASE("intensity families") {
    CHECK_THROWS_AS(IntensityFamily::constant(0.0), ParameterError);
    CHECK_THROWS_AS(IntensityFamily::logistic_radial(2.0, 1.0, 5.0, 1.0), ParameterError);
    CHECK_THROWS_AS(IntensityFamily::logistic_radial(1.0, 2.0, 5.0, 0.0), ParameterError);

    IntensityFamily lam = IntensityFamily::logistic_radial(1.0, 2.0, 5.0, 1.0);
    CHECK(lam.lower() == 1.0);
    CHECK(lam.upper() == 2.0);
    CHECK(lam.eval(5.0) == doctest::Approx(1.5).epsilon(1e-15));  // midpoint
    CHECK(lam.eval(1e9) == doctest::Approx(2.0).epsilon(1e-12));  // asymptote
    CHECK(IntensityFamily::constant(2.0).eval(123.0) == 2.0);
}

TEST_CASE("build_model fills the bounds cache") {
    auto m = testsupport::reference_model();
    CHECK(m.bounds.r_minus == 2.0);
    CHECK(m.bounds.r_plus == 1.0);
    CHECK(m.bounds.lam0_lo == 0.5);
    CHECK(m.bounds.lam0_hi == 0.5);
    CHECK(m.bounds.lam1_lo == 2.0);
    CHECK(m.bounds.lam1_hi == 2.0);
    CHECK(m.bounds.M == 1.0);
    CHECK(m.bounds.b_norm == 2.0);
    CHECK(m.bounds.R_minus == 3.0);  // 2*2 - 1
    CHECK(m.bounds.R_plus == 3.0);   // 2*1 + 1
    CHECK(m.lambda_bar() == 2.0);

    CHECK_THROWS_AS(build_model(0, DriftFamily::zero(), DriftFamily::zero(),
                                IntensityFamily::constant(1.0), IntensityFamily::constant(1.0)),
                    ParameterError);
}

TEST_CASE("Remark-2 margins with per-regime diffusion scale") {
    auto m = build_model(2, DriftFamily::inverse_radial(3.0, -1, 1.0),
                         DriftFamily::inverse_radial(1.0, +1, 1.0),
                         IntensityFamily::constant(0.5), IntensityFamily::constant(4.0),
                         DiffusionFamily::scalar_per_regime(1.0, 0.5));
    CHECK(m.bounds.trace_a0 == doctest::Approx(2.0));       // d * 1
    CHECK(m.bounds.trace_a1 == doctest::Approx(0.5));       // d * 0.25
    CHECK(m.bounds.R_minus == doctest::Approx(4.0));        // 6 - 2
    CHECK(m.bounds.R_plus == doctest::Approx(2.5));         // 2 + 0.5
    auto rep = check_recurrence_criterion(m);
    CHECK(rep.recurrent);
    CHECK(rep.A == doctest::Approx(16.0));
    CHECK(rep.B == doctest::Approx(1.25));
}

TEST_CASE("family bounds hold at random points") {
    PathRng rng(7);
    auto random_x = [&](int dim, double scale) {
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (double& c : x) c = scale * (2.0 * rng.next_double() - 1.0);
        return x;
    };
    auto m = build_model(3, DriftFamily::inverse_radial(2.0, -1, 0.7),
                         DriftFamily::constant_radial(1.3, -1, 2.0),
                         IntensityFamily::logistic_radial(1.0, 2.0, 5.0, 1.0),
                         IntensityFamily::constant(2.0));
    std::vector<double> out(3);
    for (int i = 0; i < 10000; ++i) {
        auto x = random_x(3, i % 2 == 0 ? 3.0 : 50.0);
        for (int z : {0, 1}) {
            double lam = m.intensity_eval(x, z);
            const IntensityFamily& fam = m.intensity[static_cast<std::size_t>(z)];
            CHECK(lam >= fam.lower());
            CHECK(lam <= fam.upper());
            m.drift_eval(x, z, out);
            double nb = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
            CHECK(nb <= m.bounds.b_norm * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("radial drift is exact beyond the cap") {
    DriftFamily in = DriftFamily::inverse_radial(2.0, -1, 1.0);
    DriftFamily outw = DriftFamily::inverse_radial(1.0, +1, 1.0);
    PathRng rng(11);
    std::vector<double> x(2), b(2);
    for (int i = 0; i < 10000; ++i) {
        double r = 1.0 + 30.0 * rng.next_double();
        double ang = 6.283185307179586 * rng.next_double();
        x = {r * std::cos(ang), r * std::sin(ang)};
        in.eval(x, b);
        double xb = x[0] * b[0] + x[1] * b[1];
        CHECK(xb == doctest::Approx(-2.0).epsilon(1e-13));
        outw.eval(x, b);
        xb = x[0] * b[0] + x[1] * b[1];
        CHECK(xb == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("criterion verdict arithmetic") {
    auto rep = check_recurrence_criterion(testsupport::reference_model());
    CHECK(rep.recurrent);
    CHECK(rep.A == doctest::Approx(6.0));
    CHECK(rep.B == doctest::Approx(1.5));

    // 2 r_minus <= d
    auto m2 = build_model(3, DriftFamily::inverse_radial(1.0, -1, 1.0),
                          DriftFamily::inverse_radial(1.0, +1, 1.0),
                          IntensityFamily::constant(0.5), IntensityFamily::constant(2.0));
    auto rep2 = check_recurrence_criterion(m2);
    CHECK_FALSE(rep2.recurrent);
    CHECK(rep2.reason.find("2r_- <= d") != std::string::npos);
    CHECK_FALSE(rep2.eps.has_value());

    // balance inequality fails: A = 0.5*3 < B = 2*3
    auto m3 = build_model(1, DriftFamily::inverse_radial(2.0, -1, 1.0),
                          DriftFamily::inverse_radial(1.0, +1, 1.0),
                          IntensityFamily::constant(2.0), IntensityFamily::constant(0.5));
    auto rep3 = check_recurrence_criterion(m3);
    CHECK_FALSE(rep3.recurrent);
    CHECK(rep3.A == doctest::Approx(1.5));
    CHECK(rep3.B == doctest::Approx(6.0));
}

TEST_CASE("criterion verdict is invariant under joint intensity scaling") {
    PathRng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        double rho0 = 0.2 + 3.0 * rng.next_double();
        double rho1 = 0.2 + 3.0 * rng.next_double();
        double l0 = 0.1 + 3.0 * rng.next_double();
        double l1 = 0.1 + 3.0 * rng.next_double();
        int dim = 1 + static_cast<int>(3.0 * rng.next_double());
        auto base = build_model(dim, DriftFamily::inverse_radial(rho0, -1, 1.0),
                                DriftFamily::inverse_radial(rho1, +1, 1.0),
                                IntensityFamily::constant(l0), IntensityFamily::constant(l1));
        bool verdict = check_recurrence_criterion(base).recurrent;
        for (double s : {0.1, 3.0, 17.0}) {
            auto scaled = build_model(dim, DriftFamily::inverse_radial(rho0, -1, 1.0),
                                      DriftFamily::inverse_radial(rho1, +1, 1.0),
                                      IntensityFamily::constant(s * l0),
                                      IntensityFamily::constant(s * l1));
            CHECK(check_recurrence_criterion(scaled).recurrent == verdict);
        }
    }
}

TEST_CASE("compute_eps_q_c reproduces the worked constants") {
    // r_-=2, r_+=1, d=1, lam0_hi=0.5, lam1_lo=2, eps=0.3:
    // q = 0.5*3.3 / (2*2.7) = 1.65/5.4, c = min(3.75, 0.9375)
    auto k = compute_eps_q_c(2.0, 1.0, 1, 0.5, 2.0, 0.3);
    CHECK(k.eps == 0.3);
    CHECK(k.q == doctest::Approx(1.65 / 5.4).epsilon(1e-15));
    CHECK(k.q == doctest::Approx(0.305556).epsilon(1e-5));
    CHECK(k.c == doctest::Approx(0.9375).epsilon(1e-12));
    CHECK(k.C_z0 == doctest::Approx(1.0 / 0.9375).epsilon(1e-12));
    CHECK(k.C_z0 == doctest::Approx(1.06667).epsilon(1e-5));
    CHECK(k.C_z1 == doctest::Approx(1.0 / 0.9375 + 0.5).epsilon(1e-12));
    CHECK(k.C_z1 == doctest::Approx(1.56667).epsilon(1e-5));

    // default eps rule picks 0.1*(2 r_- - d) = 0.3 here
    auto kd = compute_eps_q_c(2.0, 1.0, 1, 0.5, 2.0);
    CHECK(kd.eps == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(kd.q == doctest::Approx(k.q).epsilon(1e-15));
    CHECK(kd.c == doctest::Approx(k.c).epsilon(1e-15));

    // A = 1 < B = 3: no feasible eps at all
    CHECK_THROWS_AS(compute_eps_q_c(1.0, 1.0, 1, 1.0, 1.0, 0.1), InfeasibilityError);
    CHECK_THROWS_AS(compute_eps_q_c(1.0, 1.0, 1, 1.0, 1.0), InfeasibilityError);
    // feasible criterion but eps pushed past q < 1
    CHECK_THROWS_AS(compute_eps_q_c(2.0, 1.0, 1, 0.5, 2.0, 2.9), InfeasibilityError);
    CHECK_THROWS_AS(compute_eps_q_c(2.0, 1.0, 1, 0.5, 2.0, -0.1), ParameterError);
}

TEST_CASE("balance equation holds to 1e-12 for random feasible models") {
    PathRng rng(37);
    int feasible = 0;
    for (int trial = 0; trial < 500; ++trial) {
        double r_minus = 0.3 + 4.0 * rng.next_double();
        double r_plus = 0.1 + 2.0 * rng.next_double();
        int dim = 1 + static_cast<int>(3.0 * rng.next_double());
        double lam0_hi = 0.05 + 2.0 * rng.next_double();
        double lam1_lo = 0.05 + 4.0 * rng.next_double();
        double Rm = 2.0 * r_minus - dim, Rp = 2.0 * r_plus + dim;
        if (!(Rm > 0) || !(lam1_lo * Rm > lam0_hi * Rp)) continue;
        ++feasible;
        auto k = compute_eps_q_c(r_minus, r_plus, dim, lam0_hi, lam1_lo);
        CHECK(k.q > 0.0);
        CHECK(k.q < 1.0);
        CHECK(k.c > 0.0);
        CHECK(k.eps > 0.0);
        double lhs = lam0_hi * (Rp + k.eps);
        double rhs = k.q * lam1_lo * (Rm - k.eps);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
    CHECK(feasible > 50);
}
