#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace dnv {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]; b may be +inf. Refinement
/// stops once the error is below rel_tol * |f|_1 or below abs_tol.
template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 15,
                     double abs_tol = 0.0) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    if (!(b > a)) return {};
    double err = 0.0;
    double l1 = 0.0;
    double tol = rel_tol;
    if (abs_tol > 0.0) {
        const double rough = GK::integrate(f, a, b, 0, rel_tol, &err, &l1);
        if (l1 <= abs_tol) return {rough, err};
        tol = std::max(rel_tol, abs_tol / l1);
    }
    const double v = GK::integrate(f, a, b, max_depth, tol, &err, &l1);
    return {v, err};
}

/// Non-adaptive estimate of int |f| over the pieces, used to set an
/// absolute tolerance.
template <class F>
double rough_l1(F&& f, std::vector<double> points) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    std::sort(points.begin(), points.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        double err = 0.0;
        double l1 = 0.0;
        GK::integrate(f, points[i], points[i + 1], 0, 1.0, &err, &l1);
        total += l1;
    }
    return total;
}

/// Integrates over consecutive pieces of a sorted, de-duplicated copy of
/// `points`. Splitting at kinks keeps every piece smooth.
template <class F>
QuadResult integrate_pieces(F&& f, std::vector<double> points, double rel_tol = 1e-12,
                            double abs_tol = 0.0) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    QuadResult total;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const auto r = integrate(f, points[i], points[i + 1], rel_tol, 15, abs_tol);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

}  // namespace dnv
