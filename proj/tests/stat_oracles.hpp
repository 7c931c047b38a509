#pragma once

// Test-only statistics: empirical moments, Kolmogorov-Smirnov and chi-square
// helpers. Kept independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace aoa::test {

inline double mean(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double>& v)
{
    const double m = mean(v);
    double ss = 0.0;
    for (const double x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double kurtosis(const std::vector<double>& v)
{
    const double m = mean(v);
    double m2 = 0.0;
    double m4 = 0.0;
    for (const double x : v) {
        const double d = (x - m) * (x - m);
        m2 += d;
        m4 += d * d;
    }
    const double n = static_cast<double>(v.size());
    m2 /= n;
    m4 /= n;
    return m4 / (m2 * m2);
}

/// sup |F_empirical - F| over the sample.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf)
{
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
    }
    return d;
}

/// Asymptotic Kolmogorov p-value for statistic d at sample size n.
inline double ks_p_value(double d, std::size_t n)
{
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) {
            break;
        }
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// Pearson statistic of equal-width bin counts over [lo, hi) against uniform.
inline double chi_square_uniform(const std::vector<double>& sample, double lo, double hi, std::size_t bins)
{
    std::vector<double> counts(bins, 0.0);
    for (const double x : sample) {
        auto b = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
        counts[std::min(b, bins - 1)] += 1.0;
    }
    const double expected = static_cast<double>(sample.size()) / static_cast<double>(bins);
    double chi2 = 0.0;
    for (const double c : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    return chi2;
}

}  // namespace aoa::test
