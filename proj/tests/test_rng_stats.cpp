#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "switchdiff/rng.hpp"
#include "switchdiff/stats.hpp"

using namespace switchdiff;

TEST_CASE("derived path streams are reproducible and distinct") {
    PathRng a = PathRng::for_path(42, 7);
    PathRng b = PathRng::for_path(42, 7);
    PathRng c = PathRng::for_path(42, 8);
    bool all_equal = true, any_equal_to_c = false;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
        all_equal = all_equal && va == vb;
        any_equal_to_c = any_equal_to_c || va == vc;
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_to_c);
}

TEST_CASE("uniform and gaussian moments") {
    PathRng rng(3);
    RunningStat u, g;
    for (int i = 0; i < 200000; ++i) {
        u.add(rng.next_double());
        g.add(rng.next_gaussian());
    }
    CHECK(std::abs(u.mean() - 0.5) < 4.0 * u.stderr_mean());
    CHECK(std::abs(g.mean()) < 4.0 * g.stderr_mean());
    CHECK(g.variance() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("running stat merge equals pooled accumulation") {
    PathRng rng(5);
    RunningStat whole, left, right;
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(rng.next_gaussian() * 3.0 + 1.0);
    for (int i = 0; i < 1000; ++i) {
        whole.add(xs[static_cast<std::size_t>(i)]);
        (i < 400 ? left : right).add(xs[static_cast<std::size_t>(i)]);
    }
    left.merge(right);
    CHECK(left.count() == whole.count());
    CHECK(left.mean() == doctest::Approx(whole.mean()).epsilon(1e-12));
    CHECK(left.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));
}

TEST_CASE("quantiles interpolate") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 4.0);
    CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("one-sample KS accepts exponential data and rejects shifted data") {
    std::mt19937_64 gen(12345);
    std::exponential_distribution<double> expo(2.0);
    std::vector<double> good, bad;
    for (int i = 0; i < 20000; ++i) {
        double v = expo(gen);
        good.push_back(v);
        bad.push_back(v + 0.05);
    }
    auto ok = ks_test_exponential(good, 2.0);
    CHECK(ok.p_value > 0.01);
    auto rej = ks_test_exponential(bad, 2.0);
    CHECK(rej.p_value < 1e-6);
    auto wrong_rate = ks_test_exponential(good, 2.5);
    CHECK(wrong_rate.p_value < 1e-6);
}

TEST_CASE("two-sample KS") {
    std::mt19937_64 gen(99);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> a, b, c;
    for (int i = 0; i < 5000; ++i) {
        a.push_back(n01(gen));
        b.push_back(n01(gen));
        c.push_back(n01(gen) + 0.15);
    }
    CHECK(ks_test_two_sample(a, b).p_value > 0.01);
    CHECK(ks_test_two_sample(a, c).p_value < 1e-4);
    // identical samples: D = 0 even with all values tied
    CHECK(ks_test_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("kolmogorov tail endpoints") {
    CHECK(kolmogorov_tail(0.0) == 1.0);
    CHECK(kolmogorov_tail(4.0) < 1e-12);
    CHECK(kolmogorov_tail(0.8281) == doctest::Approx(0.5).epsilon(0.01));
}
