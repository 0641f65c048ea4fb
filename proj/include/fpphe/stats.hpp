#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace fpphe {

struct Interval {
    double low = 0.0;
    double high = 1.0;

    bool contains(double x) const { return low <= x && x <= high; }
    bool operator==(const Interval&) const = default;
};

inline constexpr double kZ95 = 1.959963984540054;

// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = kZ95) {
    if (trials <= 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = successes / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline double binomial_standard_error(double p, std::int64_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

// Standard normal upper tail.
inline double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// One-sided pooled two-proportion z-test of H1: p_a < p_b. Returns the p-value.
inline double one_sided_proportion_test(std::int64_t succ_a, std::int64_t n_a, std::int64_t succ_b,
                                        std::int64_t n_b) {
    const double pa = static_cast<double>(succ_a) / n_a;
    const double pb = static_cast<double>(succ_b) / n_b;
    const double pool = static_cast<double>(succ_a + succ_b) / (n_a + n_b);
    const double se = std::sqrt(pool * (1.0 - pool) * (1.0 / n_a + 1.0 / n_b));
    if (se == 0.0) return pa < pb ? 0.0 : 1.0;
    return normal_upper_tail((pb - pa) / se);
}

}  // namespace fpphe
