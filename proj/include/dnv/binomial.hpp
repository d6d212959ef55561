#pragma once

#include "dnv/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace dnv {

namespace detail {

/// log(n!) - log(sqrt(2 pi n) (n/e)^n), Stirling's error term.
inline double stirlerr(double n) {
    constexpr double S0 = 1.0 / 12.0;
    constexpr double S1 = 1.0 / 360.0;
    constexpr double S2 = 1.0 / 1260.0;
    constexpr double S3 = 1.0 / 1680.0;
    constexpr double S4 = 1.0 / 1188.0;
    if (n <= 15.0) {
        return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n -
               0.5 * std::log(2.0 * std::numbers::pi);
    }
    const double nn = n * n;
    if (n > 500) return (S0 - S1 / nn) / n;
    if (n > 80) return (S0 - (S1 - S2 / nn) / nn) / n;
    if (n > 35) return (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n;
    return (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n;
}

/// Deviance term x log(x/np) + np - x, accurate when x is close to np.
inline double bd0(double x, double np) {
    if (std::fabs(x - np) < 0.1 * (x + np)) {
        double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2.0 * x * v;
        v *= v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v;
            const double s1 = s + ej / (2 * j + 1);
            if (s1 == s) return s1;
            s = s1;
        }
        return s;
    }
    return x * std::log(x / np) + np - x;
}

}  // namespace detail

/// Pr[Bin(n,p) = k] by the saddle-point expansion, ~1 ulp-level relative
/// accuracy even when the probability is far in a tail.
inline double binomial_pmf(std::int64_t n, std::int64_t k, double p) {
    if (k < 0 || k > n) return 0.0;
    const double q = 1.0 - p;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (q <= 0.0) return k == n ? 1.0 : 0.0;
    const double dn = static_cast<double>(n);
    const double x = static_cast<double>(k);
    // 1 - p is exact for p >= 1/2
    if (k == 0) return p < 0.5 ? std::exp(dn * std::log1p(-p)) : std::pow(q, dn);
    if (k == n) return p >= 0.5 ? std::exp(dn * std::log1p(-q)) : std::pow(p, dn);
    const double lc = detail::stirlerr(dn) - detail::stirlerr(x) - detail::stirlerr(dn - x) -
                      detail::bd0(x, dn * p) - detail::bd0(dn - x, dn * q);
    const double lf = std::log(2.0 * std::numbers::pi) + std::log(x) + std::log1p(-x / dn);
    return std::exp(lc - 0.5 * lf);
}

struct BinomialTails {
    double below = 0.0;        ///< Pr[X < k]
    double at_or_above = 0.0;  ///< Pr[X >= k]
};

namespace detail {

/// Pr[X <= k-1], walking down from k-1; terms shrink when k-1 < np.
inline double binomial_lower_sum(std::int64_t n, double p, std::int64_t k) {
    double term = binomial_pmf(n, k - 1, p);
    double sum = 0.0;
    const double ratio = (1.0 - p) / p;
    for (std::int64_t j = k - 1; j >= 0; --j) {
        sum += term;
        if (j == 0) break;
        term *= static_cast<double>(j) / static_cast<double>(n - j + 1) * ratio;
        if (term <= sum * 1e-17) break;
    }
    return std::min(sum, 1.0);
}

/// Pr[X >= k], walking up from k; terms shrink when k > np.
inline double binomial_upper_sum(std::int64_t n, double p, std::int64_t k) {
    double term = binomial_pmf(n, k, p);
    double sum = 0.0;
    const double ratio = p / (1.0 - p);
    for (std::int64_t j = k; j <= n; ++j) {
        sum += term;
        if (j == n) break;
        term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * ratio;
        if (term <= sum * 1e-17) break;
    }
    return std::min(sum, 1.0);
}

}  // namespace detail

/// Both tails of X ~ Bin(n,p) around the integer threshold k. The smaller
/// tail is summed directly, walking away from the mean so the terms shrink
/// and the loop stops once they no longer change the sum. When k-1 < np < k
/// both walks are stable and the smaller result is kept.
inline BinomialTails binomial_tails(std::int64_t n, double p, std::int64_t k) {
    if (k <= 0) return {0.0, 1.0};
    if (k > n) return {1.0, 0.0};
    if (p <= 0.0) return {1.0, 0.0};
    if (p >= 1.0) return {0.0, 1.0};
    const double mean = static_cast<double>(n) * p;
    const bool lower_ok = static_cast<double>(k - 1) < mean;
    const bool upper_ok = static_cast<double>(k) > mean;
    if (upper_ok) {
        const double up = detail::binomial_upper_sum(n, p, k);
        if (up <= 0.5 || !lower_ok) return {1.0 - up, up};
    }
    const double lo = detail::binomial_lower_sum(n, p, k);
    return {lo, 1.0 - lo};
}

/// Pr[Bin(n,p)/n < q]: the probability that an empirical CDF built from n
/// draws sits strictly below q at a point where the true CDF equals p.
inline double binomial_cdf_below(std::int64_t n, double p, double q) {
    return binomial_tails(n, p, min_count(n, q)).below;
}

}  // namespace dnv
