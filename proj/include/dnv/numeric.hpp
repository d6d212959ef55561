#pragma once

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace dnv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Clustering exponent beta lives in [0, inf]; infinity is a first-class value.
inline bool is_infinite_beta(double beta) { return std::isinf(beta) && beta > 0; }

/// 1/(beta+1), which is 0 for beta = inf.
inline double inverse_order(double beta) {
    return is_infinite_beta(beta) ? 0.0 : 1.0 / (beta + 1.0);
}

/// (beta+2)/(beta+1), the regret exponent in |F-q|; tends to 1 as beta -> inf.
inline double regret_order(double beta) {
    return is_infinite_beta(beta) ? 1.0 : (beta + 2.0) / (beta + 1.0);
}

/// (beta+2)/(2beta+2), the convergence rate in n; 1/2 at beta = inf.
inline double rate_exponent(double beta) { return 0.5 * regret_order(beta); }

/// x^(beta+1) for x >= 0 with the continuous-limit convention at beta = inf.
inline double pow_order(double x, double beta) {
    if (is_infinite_beta(beta)) {
        if (x < 1.0) return 0.0;
        return x == 1.0 ? 1.0 : kInf;
    }
    return std::pow(x, beta + 1.0);
}

/// x^(1/(beta+1)) for x >= 0; at beta = inf this is 1 for x > 0.
inline double root_order(double x, double beta) {
    if (is_infinite_beta(beta)) return x > 0.0 ? 1.0 : 0.0;
    return std::pow(x, 1.0 / (beta + 1.0));
}

/// Smallest k in [0, n] with k/n >= q, evaluated in the same floating-point
/// arithmetic an empirical CDF uses (count / n), so SAA and the binomial
/// threshold agree exactly.
inline std::int64_t min_count(std::int64_t n, double q) {
    const double dn = static_cast<double>(n);
    auto k = static_cast<std::int64_t>(std::ceil(dn * q));
    if (k < 0) k = 0;
    if (k > n) k = n;
    while (k > 0 && static_cast<double>(k - 1) / dn >= q) --k;
    while (k < n && static_cast<double>(k) / dn < q) ++k;
    return k;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_quantile(double p) {
    if (p <= 0.0) return -kInf;
    if (p >= 1.0) return kInf;
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

}  // namespace dnv
