#pragma once

// Reference computations that share no code path with the library.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

/// C(n,k) p^k (1-p)^(n-k) through lgamma in long double.
inline double binom_pmf(std::int64_t n, std::int64_t k, double p) {
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const long double ln = std::lgamma(static_cast<long double>(n) + 1) -
                           std::lgamma(static_cast<long double>(k) + 1) -
                           std::lgamma(static_cast<long double>(n - k) + 1) +
                           static_cast<long double>(k) * std::log(static_cast<long double>(p)) +
                           static_cast<long double>(n - k) * std::log1p(-static_cast<long double>(p));
    return static_cast<double>(std::exp(ln));
}

/// Pr[Bin(n,p) < k] by explicit summation.
inline double binom_below_sum(std::int64_t n, double p, std::int64_t k) {
    long double s = 0;
    for (std::int64_t j = 0; j < std::min(k, n + 1); ++j) s += binom_pmf(n, j, p);
    return static_cast<double>(std::min<long double>(s, 1));
}

/// Pr[Bin(n,p) >= k] = I_p(k, n-k+1).
inline double binom_at_or_above_ibeta(std::int64_t n, double p, std::int64_t k) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    return boost::math::ibeta(static_cast<double>(k), static_cast<double>(n - k + 1), p);
}

/// Pr[Bin(n,p) < k] = I_{1-p}(n-k+1, k).
inline double binom_below_ibeta(std::int64_t n, double p, std::int64_t k) {
    if (k <= 0) return 0.0;
    if (k > n) return 1.0;
    return boost::math::ibeta(static_cast<double>(n - k + 1), static_cast<double>(k), 1.0 - p);
}

/// Smallest k with k/n >= q, by linear scan.
inline std::int64_t ceil_count(std::int64_t n, double q) {
    for (std::int64_t k = 0; k <= n; ++k) {
        if (static_cast<double>(k) / static_cast<double>(n) >= q) return k;
    }
    return n;
}

struct Atom {
    double z;
    double p;
};

/// E[q (Z-a)^+ + (1-q) (a-Z)^+] for a finite discrete law.
inline double discrete_loss(const std::vector<Atom>& atoms, double q, double a) {
    double s = 0.0;
    for (const auto& at : atoms) s += at.p * (q * std::max(at.z - a, 0.0) + (1.0 - q) * std::max(a - at.z, 0.0));
    return s;
}

/// Expected regret of SAA for a finite discrete law: the SAA action is the
/// smallest atom whose empirical CDF reaches q. Atom masses below a* come from
/// Pr[action <= x] and above a* from Pr[action > x], so only small tails are
/// ever subtracted.
inline double discrete_expected_regret(std::vector<Atom> atoms, double q, std::int64_t n) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.z < b.z; });
    const std::int64_t k = ceil_count(n, q);
    std::vector<double> cum;
    double c = 0.0;
    for (const auto& at : atoms) cum.push_back(c += at.p);
    cum.back() = 1.0;
    std::size_t star = atoms.size() - 1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (cum[i] >= q - 1e-15) {
            star = i;
            break;
        }
    }
    const double opt = discrete_loss(atoms, q, atoms[star].z);
    double total = 0.0;
    for (std::size_t i = 0; i < star; ++i) {
        const double le = binom_at_or_above_ibeta(n, cum[i], k);
        const double prev = i == 0 ? 0.0 : binom_at_or_above_ibeta(n, cum[i - 1], k);
        total += (le - prev) * (discrete_loss(atoms, q, atoms[i].z) - opt);
    }
    for (std::size_t i = star + 1; i < atoms.size(); ++i) {
        const double gt_prev = binom_below_ibeta(n, cum[i - 1], k);
        const double gt = i + 1 == atoms.size() ? 0.0 : binom_below_ibeta(n, cum[i], k);
        total += (gt_prev - gt) * (discrete_loss(atoms, q, atoms[i].z) - opt);
    }
    return total;
}

/// Uniform(0,1): regret(a) = (a - q)^2 / 2 and the SAA action is the k-th
/// order statistic, Beta(k, n-k+1).
inline double uniform_expected_regret(double q, std::int64_t n) {
    const double k = static_cast<double>(ceil_count(n, q));
    const double nn = static_cast<double>(n);
    const double m = k / (nn + 1.0);
    const double v = k * (nn - k + 1.0) / ((nn + 1.0) * (nn + 1.0) * (nn + 2.0));
    return 0.5 * (v + (m - q) * (m - q));
}

/// int_a^b f by tanh-sinh, or exp-sinh when b is infinite.
inline double quad(const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return 0.0;
    if (std::isinf(b)) {
        // z = a + t/(1-t) keeps algebraic tails integrable on [0,1)
        boost::math::quadrature::tanh_sinh<double> ts;
        return ts.integrate(
            [&](double t) {
                const double w = 1.0 - t;
                return f(a + t / w) / (w * w);
            },
            0.0, 1.0);
    }
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([&](double t) { return f(t); }, a, b);
}

/// Integral over consecutive pieces of a sorted cut list.
inline double quad_pieces(const std::function<double(double)>& f, std::vector<double> cuts) {
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += quad(f, cuts[i], cuts[i + 1]);
    return s;
}

}  // namespace oracle
