#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace ruinlab::testing {

/// One-sample Kolmogorov-Smirnov statistic D_n.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

/// Critical value at alpha = 0.001 (asymptotic).
inline double ks_critical(std::size_t n) { return 1.949 / std::sqrt(static_cast<double>(n)); }

struct Moments {
    double mean = 0.0;
    double se = 0.0;
};

inline Moments moments(const std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    double s = 0.0, s2 = 0.0;
    for (double x : xs) {
        s += x;
        s2 += x * x;
    }
    const double m = s / n;
    return {m, std::sqrt(std::max(0.0, (s2 - n * m * m) / (n - 1.0)) / n)};
}

}  // namespace ruinlab::testing
