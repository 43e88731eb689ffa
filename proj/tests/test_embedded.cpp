#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "switchdiff/embedded.hpp"
#include "switchdiff/errors.hpp"
#include "switchdiff/rng.hpp"
#include "switchdiff/simulate.hpp"
#include "switchdiff/stats.hpp"

using namespace switchdiff;

namespace {

SwitchEvent ev(std::int64_t n, double t, double x, int regime) {
    return SwitchEvent{n, t, {x}, regime};
}

}  // namespace

TEST_CASE("extract_switch_times is the identity on the event list") {
    auto m = testsupport::reference_model();
    SimParams p{1e-3, 10.0, 77, 100};
    std::vector<double> x0{2.0};
    PathRecord rec = simulate_path(m, x0, 0, p);
    auto events = extract_switch_times(rec);
    REQUIRE(events.size() == rec.events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(events[i].time == rec.events[i].time);
        CHECK(events[i].n == rec.events[i].n);
    }
    // marker present for z0 = 0 even when nothing switches
    auto quiet = build_model(1, DriftFamily::zero(), DriftFamily::zero(),
                             IntensityFamily::constant(1e-6), IntensityFamily::constant(1e-6));
    SimParams pq{1e-2, 1.0, 3, 10};
    PathRecord rq = simulate_path(quiet, x0, 0, pq);
    REQUIRE(extract_switch_times(rq).size() == 1);
    CHECK(extract_switch_times(rq).front().time == 0.0);
    // and absent for z0 = 1 censored before the first switch
    PathRecord rq1 = simulate_path(quiet, x0, 1, pq);
    CHECK(extract_switch_times(rq1).empty());
}

TEST_CASE("embedded_tau basics") {
    std::vector<SwitchEvent> events;
    events.push_back(ev(0, 0.4, 0.5, 0));
    events.push_back(ev(1, 1.3, 5.0, 1));
    CHECK(embedded_tau(events, 2.0) == 0.4);

    std::vector<SwitchEvent> far;
    far.push_back(ev(0, 0.4, 4.0, 0));
    far.push_back(ev(1, 1.3, 5.0, 1));
    CHECK_FALSE(embedded_tau(far, 2.0).has_value());
    CHECK_FALSE(embedded_tau({}, 2.0).has_value());
}

TEST_CASE("embedded_tau equals a linear scan on random event lists") {
    PathRng rng(404);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<SwitchEvent> events;
        double t = 0.0;
        int len = static_cast<int>(rng.next_double() * 20.0);
        for (int i = 0; i < len; ++i) {
            t += rng.next_exponential(1.0);
            events.push_back(ev(i, t, 6.0 * rng.next_double(), i % 2));
        }
        double m1 = 3.0 * rng.next_double();
        // brute-force scan, kept as a regression pin
        std::optional<double> expected;
        for (const auto& e : events)
            if (std::abs(e.x_at[0]) <= m1) {
                expected = e.time;
                break;
            }
        CHECK(embedded_tau(events, m1) == expected);
    }
}

TEST_CASE("interval pooling handles both start conventions") {
    // z0=0 path: marker at 0, switches at 1.0 (to regime 1) and 1.5 (to 0):
    // one regime-0 interval [0,1] and one regime-1 interval [1,1.5]; the
    // trailing regime-0 stretch is open.
    std::vector<std::vector<SwitchEvent>> batches;
    batches.push_back({ev(0, 0.0, 9.0, 0), ev(1, 1.0, 9.0, 1), ev(2, 1.5, 9.0, 0)});
    // z0=1 path: first event at 0.7 closes the initial regime-1 stretch.
    batches.push_back({ev(0, 0.7, 9.0, 0), ev(1, 2.7, 9.0, 1)});

    std::int64_t open0 = 0, open1 = 0;
    auto r0 = pool_regime_intervals(batches, 0, &open0);
    auto r1 = pool_regime_intervals(batches, 1, &open1);
    REQUIRE(r0.size() == 2);
    CHECK(r0[0] == 1.0);
    CHECK(r0[1] == 2.0);
    CHECK(open0 == 1);  // first path censored while in regime 0
    REQUIRE(r1.size() == 2);
    CHECK(r1[0] == 0.5);
    CHECK(r1[1] == doctest::Approx(0.7));
    CHECK(open1 == 1);  // second path censored while in regime 1
}

TEST_CASE("interval_stats against the exponential sojourn law") {
    auto m = testsupport::reference_model();  // constant rates 0.5 / 2
    std::vector<std::vector<SwitchEvent>> batches;
    std::vector<double> x0{1.0};
    for (int i = 0; i < 120; ++i) {
        SimParams p{1e-2, 250.0, PathRng::derive_seed(9000, static_cast<std::uint64_t>(i)), 1000};
        batches.push_back(simulate_path(m, x0, 0, p).events);
    }
    IntervalStats s1 = interval_stats(batches, 1, m);
    CHECK(s1.count > 10000);
    CHECK(s1.lemma_lo == doctest::Approx(0.5));
    CHECK(s1.lemma_hi == doctest::Approx(0.5));
    CHECK(std::abs(s1.mean - 0.5) <= 3.0 * s1.stderr_mean);
    CHECK(s1.within_bounds);

    IntervalStats s0 = interval_stats(batches, 0, m);
    CHECK(s0.lemma_lo == doctest::Approx(2.0));
    CHECK(std::abs(s0.mean - 2.0) <= 3.0 * s0.stderr_mean);
    CHECK(s0.within_bounds);

    // a single closed interval is not enough
    std::vector<std::vector<SwitchEvent>> one;
    one.push_back({ev(0, 0.0, 9.0, 0), ev(1, 1.0, 9.0, 1)});
    CHECK_THROWS_AS(interval_stats(one, 0, m), EstimationError);
}

TEST_CASE("state-dependent intensity keeps sojourn means inside the lemma band") {
    auto m = build_model(1, DriftFamily::inverse_radial(2.0, -1, 1.0),
                         DriftFamily::inverse_radial(1.0, +1, 1.0),
                         IntensityFamily::logistic_radial(1.0, 2.0, 5.0, 1.0),
                         IntensityFamily::constant(2.0));
    std::vector<std::vector<SwitchEvent>> batches;
    std::vector<double> x0{0.0};
    for (int i = 0; i < 40; ++i) {
        SimParams p{1e-2, 100.0, PathRng::derive_seed(1300, static_cast<std::uint64_t>(i)), 1000};
        batches.push_back(simulate_path(m, x0, 0, p).events);
    }
    IntervalStats s = interval_stats(batches, 0, m);
    CHECK(s.lemma_lo == doctest::Approx(0.5));
    CHECK(s.lemma_hi == doctest::Approx(1.0));
    CHECK(s.count > 1500);
    CHECK(s.within_bounds);
    CHECK(s.mean + 3.0 * s.stderr_mean >= 0.5);
    CHECK(s.mean - 3.0 * s.stderr_mean <= 1.0);
}

TEST_CASE("occupation time: boundary start occupies the whole first interval") {
    auto m = testsupport::reference_model();
    // |x0| = M: the running infimum is already <= M at t = 0, so the
    // occupation equals the first-switch time, whose mean is 1/lambda_0 = 2.
    std::vector<double> x0{1.0};
    SimParams p{1e-2, 60.0, 2718, 1};
    OccupationReport rep = occupation_time_near_origin(m, x0, 0, 1.0, p, 400);
    CHECK(rep.n_censored == 0);
    CHECK(std::abs(rep.mean_occupation - 2.0) <= 3.0 * rep.stderr_mean);
    CHECK_FALSE(rep.reliability_warning);
}

TEST_CASE("occupation time is zero when the ball is never reached") {
    // switch arrives almost immediately; |X| cannot travel from 100 to 1
    auto m = build_model(1, DriftFamily::inverse_radial(2.0, -1, 1.0),
                         DriftFamily::inverse_radial(1.0, +1, 1.0),
                         IntensityFamily::constant(50.0), IntensityFamily::constant(50.0));
    std::vector<double> x0{100.0};
    SimParams p{1e-3, 10.0, 5, 1};
    OccupationReport rep = occupation_time_near_origin(m, x0, 0, 1.0, p, 200);
    CHECK(rep.mean_occupation == 0.0);
    CHECK(rep.stderr_mean == 0.0);
}

TEST_CASE("occupation preconditions and censoring warning") {
    auto m = testsupport::reference_model();
    std::vector<double> x0{5.0};
    SimParams p{1e-2, 60.0, 6, 1};
    CHECK_THROWS_AS(occupation_time_near_origin(m, x0, 0, 1.0, p, 50), ParameterError);
    SimParams stride{1e-2, 60.0, 6, 2};
    CHECK_THROWS_AS(occupation_time_near_origin(m, x0, 0, 1.0, stride, 200), ParameterError);
    std::vector<double> inside{0.5};
    CHECK_THROWS_AS(occupation_time_near_origin(m, inside, 0, 1.0, p, 200), ParameterError);

    // horizon 1 censors ~61% of regime-0 first switches (rate 0.5)
    SimParams shrt{1e-2, 1.0, 6, 1};
    OccupationReport rep = occupation_time_near_origin(m, x0, 0, 1.0, shrt, 400);
    CHECK(rep.reliability_warning);
    CHECK(rep.n_censored * 2 > rep.n_paths);
}
