#include "switchdiff/stats.hpp"

#include <algorithm>
#include <cmath>

#include "switchdiff/errors.hpp"

namespace switchdiff {

void RunningStat::add(double x) {
    ++n_;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningStat::merge(const RunningStat& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    double delta = other.mean_ - mean_;
    std::int64_t n = n_ + other.n_;
    double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
    mean_ += delta * nb / static_cast<double>(n);
    m2_ += other.m2_ + delta * delta * na * nb / static_cast<double>(n);
    n_ = n;
}

double RunningStat::variance() const {
    if (n_ < 2) return 0.0;
    return m2_ / static_cast<double>(n_ - 1);
}

double RunningStat::stderr_mean() const {
    if (n_ < 1) return 0.0;
    return std::sqrt(variance() / static_cast<double>(n_));
}

double quantile(std::span<const double> samples, double q) {
    if (samples.empty()) throw EstimationError("quantile: no samples");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    if (q <= 0) return s.front();
    if (q >= 1) return s.back();
    double pos = q * static_cast<double>(s.size() - 1);
    std::size_t i = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(i);
    if (i + 1 >= s.size()) return s.back();
    return s[i] * (1.0 - frac) + s[i + 1] * frac;
}

double kolmogorov_tail(double t) {
    if (t <= 0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * t * t);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

// Finite-n correction of the asymptotic Kolmogorov p-value.
double ks_p_value(double d, double n_eff) {
    double rn = std::sqrt(n_eff);
    return kolmogorov_tail((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

KsResult ks_test_exponential(std::span<const double> samples, double rate) {
    if (samples.size() < 2) throw EstimationError("ks_test_exponential: need >= 2 samples");
    if (!(rate > 0)) throw ParameterError("ks_test_exponential: rate must be > 0");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double cdf = 1.0 - std::exp(-rate * s[i]);
        double hi = static_cast<double>(i + 1) / n - cdf;
        double lo = cdf - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    return {d, ks_p_value(d, n)};
}

KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw EstimationError("ks_test_two_sample: need >= 2 samples each");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= v) ++i;  // step over ties together
        while (j < sb.size() && sb[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    double n_eff = na * nb / (na + nb);
    return {d, ks_p_value(d, n_eff)};
}

}  // namespace switchdiff
