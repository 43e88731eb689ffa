#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace switchdiff {

/// Streaming (count, sum, sum of squared deviations) accumulator.
/// merge() is associative and commutative, so batch reductions can be
/// combined in any grouping.
class RunningStat {
public:
    void add(double x);
    void merge(const RunningStat& other);

    std::int64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const;  // unbiased; 0 for n < 2
    double stderr_mean() const;

private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Linear-interpolated sample quantile, q in [0, 1]. Sorts a copy.
double quantile(std::span<const double> samples, double q);

/// Asymptotic Kolmogorov distribution tail Q(t) = P(sup|B| > t),
/// Q(t) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_tail(double t);

struct KsResult {
    double statistic;  // sup-norm distance between the compared CDFs
    double p_value;    // asymptotic, with the usual finite-n correction
};

/// One-sample Kolmogorov-Smirnov test of `samples` against Exp(rate).
KsResult ks_test_exponential(std::span<const double> samples, double rate);

/// Two-sample Kolmogorov-Smirnov test.
KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace switchdiff
