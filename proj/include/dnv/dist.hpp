#pragma once

#include "dnv/errors.hpp"
#include "dnv/numeric.hpp"
#include "dnv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace dnv {

/// One point of a piecewise-linear CDF; the jump right - left is an atom.
struct Breakpoint {
    double z = 0.0;
    double left = 0.0;
    double right = 0.0;
};

namespace detail {

/// Moves x up by ulps until cdf(x) >= p, so rounding in a closed-form
/// inverse never breaks F(quantile(p)) >= p.
template <class Cdf>
double nudge_up(const Cdf& cdf, double x, double p, double cap = kInf) {
    for (int i = 0; i < 64 && x < cap && cdf(x) < p; ++i) x = std::nextafter(x, kInf);
    return std::min(x, cap);
}

inline std::string fmt(double x) { return std::to_string(x); }

}  // namespace detail

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;

    double cdf(double z) const {
        if (z <= lo) return 0.0;
        if (z >= hi) return 1.0;
        return (z - lo) / (hi - lo);
    }
    double cdf_left(double z) const { return cdf(z); }
    double quantile(double p) const {
        const double x = lo + p * (hi - lo);
        return detail::nudge_up([this](double z) { return cdf(z); }, std::min(x, hi), p, hi);
    }
    double mean() const { return 0.5 * (lo + hi); }
    double cdf_integral(double a) const {
        if (a <= lo) return 0.0;
        if (a >= hi) return 0.5 * (hi - lo) + (a - hi);
        return 0.5 * (a - lo) * (a - lo) / (hi - lo);
    }
    std::pair<double, double> support() const { return {lo, hi}; }
    std::vector<double> kinks() const { return {lo, hi}; }
    std::optional<std::vector<Breakpoint>> breakpoints() const {
        return std::vector<Breakpoint>{{lo, 0.0, 0.0}, {hi, 1.0, 1.0}};
    }
    double density(double z) const { return (z > lo && z < hi) ? 1.0 / (hi - lo) : 0.0; }
};

struct Exponential {
    double rate = 1.0;

    double cdf(double z) const { return z <= 0.0 ? 0.0 : -std::expm1(-rate * z); }
    double cdf_left(double z) const { return cdf(z); }
    double quantile(double p) const {
        if (p >= 1.0) return kInf;
        return detail::nudge_up([this](double z) { return cdf(z); }, -std::log1p(-p) / rate, p);
    }
    double mean() const { return 1.0 / rate; }
    double cdf_integral(double a) const {
        if (a <= 0.0) return 0.0;
        return a + std::expm1(-rate * a) / rate;
    }
    std::pair<double, double> support() const { return {0.0, kInf}; }
    std::vector<double> kinks() const { return {0.0}; }
    std::optional<std::vector<Breakpoint>> breakpoints() const { return std::nullopt; }
    double density(double z) const { return z < 0.0 ? 0.0 : rate * std::exp(-rate * z); }
};

struct Pareto {
    double shape = 2.0;
    double scale = 1.0;

    double cdf(double z) const {
        if (z <= scale) return 0.0;
        return -std::expm1(shape * std::log(scale / z));
    }
    double cdf_left(double z) const { return cdf(z); }
    double quantile(double p) const {
        if (p >= 1.0) return kInf;
        const double x = scale * std::exp(-std::log1p(-p) / shape);
        return detail::nudge_up([this](double z) { return cdf(z); }, x, p);
    }
    double mean() const { return shape * scale / (shape - 1.0); }
    double cdf_integral(double a) const {
        if (a <= scale) return 0.0;
        const double r = std::pow(a / scale, 1.0 - shape);
        return (a - scale) - scale * (r - 1.0) / (1.0 - shape);
    }
    std::pair<double, double> support() const { return {scale, kInf}; }
    std::vector<double> kinks() const { return {scale}; }
    std::optional<std::vector<Breakpoint>> breakpoints() const { return std::nullopt; }
    double density(double z) const {
        return z <= scale ? 0.0 : shape / scale * std::pow(scale / z, shape + 1.0);
    }
};

struct Lognormal {
    double mu = 0.0;
    double sigma = 1.0;

    double cdf(double z) const {
        if (z <= 0.0) return 0.0;
        return normal_cdf((std::log(z) - mu) / sigma);
    }
    double cdf_left(double z) const { return cdf(z); }
    double quantile(double p) const {
        if (p >= 1.0) return kInf;
        const double x = std::exp(mu + sigma * normal_quantile(p));
        return detail::nudge_up([this](double z) { return cdf(z); }, x, p);
    }
    double mean() const { return std::exp(mu + 0.5 * sigma * sigma); }
    double cdf_integral(double a) const {
        if (a <= 0.0) return 0.0;
        const double d = (std::log(a) - mu) / sigma;
        return a * normal_cdf(d) - mean() * normal_cdf(d - sigma);
    }
    std::pair<double, double> support() const { return {0.0, kInf}; }
    std::vector<double> kinks() const { return {0.0}; }
    std::optional<std::vector<Breakpoint>> breakpoints() const { return std::nullopt; }
    double density(double z) const {
        if (z <= 0.0) return 0.0;
        const double d = (std::log(z) - mu) / sigma;
        return std::exp(-0.5 * d * d) / (z * sigma * std::sqrt(2.0 * std::numbers::pi));
    }
};

/// c * Ber(p): value c with probability p, value 0 otherwise.
struct ScaledBernoulli {
    double c = 1.0;
    double p = 0.5;

    double cdf(double z) const {
        if (z < 0.0) return 0.0;
        return z < c ? 1.0 - p : 1.0;
    }
    double cdf_left(double z) const {
        if (z <= 0.0) return 0.0;
        return z <= c ? 1.0 - p : 1.0;
    }
    double quantile(double u) const { return u <= 1.0 - p ? 0.0 : c; }
    double mean() const { return c * p; }
    double cdf_integral(double a) const {
        if (a <= 0.0) return 0.0;
        return (1.0 - p) * std::min(a, c) + std::max(0.0, a - c);
    }
    std::pair<double, double> support() const { return {p >= 1.0 ? c : 0.0, p <= 0.0 ? 0.0 : c}; }
    std::vector<double> kinks() const { return {0.0, c}; }
    std::optional<std::vector<Breakpoint>> breakpoints() const {
        return std::vector<Breakpoint>{{0.0, 0.0, 1.0 - p}, {c, 1.0 - p, 1.0}};
    }
    double density(double) const { return 0.0; }
};

/// Mixed discrete/continuous CDF given by breakpoints, affine in between.
struct PiecewiseCdf {
    std::vector<Breakpoint> pts;
    std::vector<double> cum;  ///< integral of F from 0 to pts[i].z

    double cdf(double z) const {
        if (z < pts.front().z) return 0.0;
        const auto it = std::upper_bound(pts.begin(), pts.end(), z,
                                         [](double v, const Breakpoint& b) { return v < b.z; });
        const auto i = static_cast<std::size_t>(it - pts.begin()) - 1;
        if (pts[i].z == z) return pts[i].right;
        if (i + 1 == pts.size()) return 1.0;
        return interp(i, z);
    }
    double cdf_left(double z) const {
        if (z <= pts.front().z) return 0.0;
        const auto it = std::lower_bound(pts.begin(), pts.end(), z,
                                         [](const Breakpoint& b, double v) { return b.z < v; });
        const auto i = static_cast<std::size_t>(it - pts.begin()) - 1;
        if (i + 1 == pts.size()) return 1.0;
        if (pts[i + 1].z == z) return pts[i + 1].left;
        return interp(i, z);
    }
    double quantile(double p) const {
        const auto it = std::partition_point(pts.begin(), pts.end(),
                                             [p](const Breakpoint& b) { return b.right < p; });
        const auto i = static_cast<std::size_t>(it - pts.begin());
        if (i > 0 && pts[i].left >= p) {
            const Breakpoint& a = pts[i - 1];
            const Breakpoint& b = pts[i];
            double x = a.z + (p - a.right) / (b.left - a.right) * (b.z - a.z);
            x = std::clamp(x, a.z, b.z);
            return detail::nudge_up([this](double z) { return cdf(z); }, x, p, b.z);
        }
        return pts[i].z;
    }
    double mean() const {
        double m = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            m += (pts[i].right - pts[i].left) * pts[i].z;
            if (i + 1 < pts.size()) {
                m += (pts[i + 1].left - pts[i].right) * 0.5 * (pts[i].z + pts[i + 1].z);
            }
        }
        return m;
    }
    double cdf_integral(double a) const {
        if (a <= pts.front().z) return 0.0;
        const auto it = std::upper_bound(pts.begin(), pts.end(), a,
                                         [](double v, const Breakpoint& b) { return v < b.z; });
        const auto i = static_cast<std::size_t>(it - pts.begin()) - 1;
        if (i + 1 == pts.size()) return cum[i] + (a - pts[i].z);
        return cum[i] + 0.5 * (a - pts[i].z) * (pts[i].right + interp(i, a));
    }
    std::pair<double, double> support() const { return {pts.front().z, pts.back().z}; }
    std::vector<double> kinks() const {
        std::vector<double> k;
        k.reserve(pts.size());
        for (const auto& b : pts) k.push_back(b.z);
        return k;
    }
    std::optional<std::vector<Breakpoint>> breakpoints() const { return pts; }
    double density(double z) const {
        if (z <= pts.front().z || z >= pts.back().z) return 0.0;
        const auto it = std::upper_bound(pts.begin(), pts.end(), z,
                                         [](double v, const Breakpoint& b) { return v < b.z; });
        const auto i = static_cast<std::size_t>(it - pts.begin()) - 1;
        if (pts[i].z == z) return 0.0;
        return (pts[i + 1].left - pts[i].right) / (pts[i + 1].z - pts[i].z);
    }

private:
    double interp(std::size_t i, double z) const {
        const Breakpoint& a = pts[i];
        const Breakpoint& b = pts[i + 1];
        const double t = (z - a.z) / (b.z - a.z);
        return a.right + t * (b.left - a.right);
    }
};

/// Step CDF of a sample; F(z) = #{x_i <= z} / n.
struct EmpiricalCdf {
    std::vector<double> xs;      ///< sorted
    std::vector<double> prefix;  ///< prefix[i] = x_0 + ... + x_{i-1}

    double n() const { return static_cast<double>(xs.size()); }
    double cdf(double z) const {
        const auto c = std::upper_bound(xs.begin(), xs.end(), z) - xs.begin();
        return static_cast<double>(c) / n();
    }
    double cdf_left(double z) const {
        const auto c = std::lower_bound(xs.begin(), xs.end(), z) - xs.begin();
        return static_cast<double>(c) / n();
    }
    double quantile(double p) const {
        const auto k = min_count(static_cast<std::int64_t>(xs.size()), p);
        return xs[static_cast<std::size_t>(std::max<std::int64_t>(k, 1) - 1)];
    }
    double mean() const { return prefix.back() / n(); }
    double cdf_integral(double a) const {
        const auto c = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), a) - xs.begin());
        return (static_cast<double>(c) * a - prefix[c]) / n();
    }
    std::pair<double, double> support() const { return {xs.front(), xs.back()}; }
    std::vector<double> kinks() const {
        std::vector<double> k(xs);
        k.erase(std::unique(k.begin(), k.end()), k.end());
        return k;
    }
    std::optional<std::vector<Breakpoint>> breakpoints() const {
        std::vector<Breakpoint> out;
        std::size_t i = 0;
        while (i < xs.size()) {
            std::size_t j = i;
            while (j < xs.size() && xs[j] == xs[i]) ++j;
            out.push_back({xs[i], static_cast<double>(i) / n(), static_cast<double>(j) / n()});
            i = j;
        }
        return out;
    }
    double density(double) const { return 0.0; }
};

/// CDF equal to q +/- (gamma |z - a*|)^(beta+1) on [a* - zeta, a* + zeta],
/// with atoms at both ends carrying the remaining mass.
struct EqualityClustered {
    double q = 0.5;
    double a_star = 0.5;
    double beta = 0.0;
    double gamma = 1.0;
    double zeta = 0.5;

    double lo() const { return a_star - zeta; }
    double hi() const { return a_star + zeta; }
    double edge_mass() const { return std::pow(gamma * zeta, beta + 1.0); }
    double inner(double z) const {
        const double t = z - a_star;
        const double v = std::pow(gamma * std::fabs(t), beta + 1.0);
        return t < 0.0 ? q - v : q + v;
    }
    double cdf(double z) const {
        if (z < lo()) return 0.0;
        if (z >= hi()) return 1.0;
        return inner(z);
    }
    double cdf_left(double z) const {
        if (z <= lo()) return 0.0;
        if (z > hi()) return 1.0;
        return inner(z);
    }
    double quantile(double p) const {
        const double m = edge_mass();
        if (p <= q - m) return lo();
        if (p > q + m) return hi();
        const double inv = 1.0 / (beta + 1.0);
        const double x = p <= q ? a_star - std::pow(q - p, inv) / gamma
                                : a_star + std::pow(p - q, inv) / gamma;
        return detail::nudge_up([this](double z) { return cdf(z); }, std::clamp(x, lo(), hi()), p,
                                hi());
    }
    double mean() const {
        const double m = edge_mass();
        return lo() * (q - m) + hi() * (1.0 - q - m) + 2.0 * m * a_star;
    }
    double cdf_integral(double a) const {
        if (a <= lo()) return 0.0;
        const double g = std::pow(gamma, beta + 1.0) / (beta + 2.0);
        const double zb = std::pow(zeta, beta + 2.0);
        if (a >= hi()) return 2.0 * q * zeta + (a - hi());
        const double t = a - a_star;
        return q * (t + zeta) + g * (std::pow(std::fabs(t), beta + 2.0) - zb);
    }
    std::pair<double, double> support() const { return {lo(), hi()}; }
    std::vector<double> kinks() const { return {lo(), a_star, hi()}; }
    std::optional<std::vector<Breakpoint>> breakpoints() const {
        if (beta != 0.0) return std::nullopt;
        return std::vector<Breakpoint>{{lo(), 0.0, q - edge_mass()}, {hi(), q + edge_mass(), 1.0}};
    }
    double density(double z) const {
        if (z <= lo() || z >= hi()) return 0.0;
        return (beta + 1.0) * std::pow(gamma, beta + 1.0) * std::pow(std::fabs(z - a_star), beta);
    }
};

/// Density a + b|2u - 1| on [0, width] after rescaling u = z / width.
struct VShapedDensity {
    double a = 0.5;
    double b = 1.0;
    double width = 1.0;

    double unit_cdf(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        const double t = u - 0.5;
        return 0.5 + a * t + (t < 0.0 ? -b : b) * t * t;
    }
    double cdf(double z) const { return unit_cdf(z / width); }
    double cdf_left(double z) const { return cdf(z); }
    double quantile(double p) const {
        const double d = p - 0.5;
        const double t = 2.0 * d / (a + std::sqrt(a * a + 4.0 * b * std::fabs(d)));
        const double x = std::clamp((0.5 + t) * width, 0.0, width);
        return detail::nudge_up([this](double z) { return cdf(z); }, x, p, width);
    }
    double mean() const { return 0.5 * width; }
    double cdf_integral(double z) const {
        const auto k = [this](double s) {
            return 0.5 * s + 0.5 * a * s * s + b * std::fabs(s) * s * s / 3.0;
        };
        if (z <= 0.0) return 0.0;
        const double u = std::min(z / width, 1.0);
        const double unit = k(u - 0.5) - k(-0.5);
        return unit * width + std::max(0.0, z - width);
    }
    std::pair<double, double> support() const { return {0.0, width}; }
    std::vector<double> kinks() const { return {0.0, 0.5 * width, width}; }
    std::optional<std::vector<Breakpoint>> breakpoints() const { return std::nullopt; }
    double density(double z) const {
        const double u = z / width;
        if (u <= 0.0 || u >= 1.0) return 0.0;
        return (a + b * std::fabs(2.0 * u - 1.0)) / width;
    }
};

enum class Family {
    uniform,
    exponential,
    pareto,
    lognormal,
    scaled_bernoulli,
    piecewise,
    empirical,
    equality_clustered,
    vshaped,
};

inline const char* family_name(Family f) {
    switch (f) {
        case Family::uniform: return "uniform";
        case Family::exponential: return "exponential";
        case Family::pareto: return "pareto";
        case Family::lognormal: return "lognormal";
        case Family::scaled_bernoulli: return "scaled_bernoulli";
        case Family::piecewise: return "piecewise";
        case Family::empirical: return "empirical";
        case Family::equality_clustered: return "equality_clustered";
        case Family::vshaped: return "vshaped";
    }
    return "unknown";
}

/// Immutable distribution on [0, inf). Construct through the factory
/// functions below, which validate parameters.
class Distribution {
public:
    using Variant = std::variant<Uniform, Exponential, Pareto, Lognormal, ScaledBernoulli,
                                 PiecewiseCdf, EmpiricalCdf, EqualityClustered, VShapedDensity>;

    explicit Distribution(Variant v) : v_(std::move(v)) {}

    Family family() const { return static_cast<Family>(v_.index()); }
    const Variant& variant() const { return v_; }

    double cdf(double z) const {
        if (std::isnan(z)) throw DomainError("cdf: NaN argument");
        return std::visit([z](const auto& d) { return d.cdf(z); }, v_);
    }
    double cdf_left(double z) const {
        if (std::isnan(z)) throw DomainError("cdf_left: NaN argument");
        return std::visit([z](const auto& d) { return d.cdf_left(z); }, v_);
    }
    /// inf{a : F(a) >= p} for p in (0, 1].
    double quantile(double p) const {
        if (!(p > 0.0 && p <= 1.0)) {
            throw DomainError("quantile: level " + detail::fmt(p) + " outside (0,1]");
        }
        return std::visit([p](const auto& d) { return d.quantile(p); }, v_);
    }
    double mean() const {
        return std::visit([](const auto& d) { return d.mean(); }, v_);
    }
    /// Integral of F over [0, a]; 0 for a <= 0.
    double cdf_integral(double a) const {
        if (a <= 0.0) return 0.0;
        if (std::isinf(a)) return kInf;
        return std::visit([a](const auto& d) { return d.cdf_integral(a); }, v_);
    }
    std::pair<double, double> support() const {
        return std::visit([](const auto& d) { return d.support(); }, v_);
    }
    /// Points where F jumps or F' is discontinuous.
    std::vector<double> kinks() const {
        return std::visit([](const auto& d) { return d.kinks(); }, v_);
    }
    /// Breakpoint form when the CDF is piecewise linear.
    std::optional<std::vector<Breakpoint>> breakpoints() const {
        return std::visit([](const auto& d) { return d.breakpoints(); }, v_);
    }
    bool is_piecewise_linear() const { return breakpoints().has_value(); }
    /// Density of the absolutely continuous part.
    double density(double z) const {
        return std::visit([z](const auto& d) { return d.density(z); }, v_);
    }

    /// Inverse-transform draws.
    void sample_into(Engine& eng, std::span<double> out) const {
        std::visit(
            [&](const auto& d) {
                for (auto& x : out) x = d.quantile(uniform_open01(eng));
            },
            v_);
    }
    std::vector<double> sample(std::uint64_t seed, std::size_t count) const {
        if (count == 0) throw ValidationError("sample: count must be positive");
        Engine eng(seed);
        std::vector<double> out(count);
        sample_into(eng, out);
        return out;
    }

    /// Distribution of c * Z.
    Distribution scaled(double c) const;

    std::string describe() const;

private:
    Variant v_;
};

inline Distribution make_uniform(double lo, double hi) {
    if (!(lo >= 0.0) || !(hi > lo) || std::isinf(hi)) {
        throw ValidationError("uniform: need 0 <= lo < hi < inf, got lo=" + detail::fmt(lo) +
                              " hi=" + detail::fmt(hi));
    }
    return Distribution(Uniform{lo, hi});
}

inline Distribution make_exponential(double rate) {
    if (!(rate > 0.0) || std::isinf(rate)) {
        throw ValidationError("exponential: rate must be positive and finite");
    }
    return Distribution(Exponential{rate});
}

inline Distribution make_exponential_mean(double mean) {
    if (!(mean > 0.0)) throw ValidationError("exponential: mean must be positive");
    return make_exponential(1.0 / mean);
}

inline Distribution make_pareto(double shape, double scale) {
    if (!(shape > 1.0)) {
        throw ValidationError("pareto: shape must exceed 1 for a finite mean, got " +
                              detail::fmt(shape));
    }
    if (!(scale > 0.0) || std::isinf(scale)) throw ValidationError("pareto: scale must be positive");
    return Distribution(Pareto{shape, scale});
}

inline Distribution make_lognormal(double mu, double sigma) {
    if (!std::isfinite(mu) || !(sigma > 0.0) || std::isinf(sigma)) {
        throw ValidationError("lognormal: need finite mu and sigma > 0");
    }
    return Distribution(Lognormal{mu, sigma});
}

inline Distribution make_scaled_bernoulli(double c, double p) {
    if (!(c > 0.0) || std::isinf(c)) throw ValidationError("scaled_bernoulli: c must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("scaled_bernoulli: p must lie in [0,1]");
    return Distribution(ScaledBernoulli{c, p});
}

/// Validates and wraps breakpoints (z, F_left, F_right). The CDF is 0 before
/// the first point, affine from F_right(i) to F_left(i+1) between points and
/// 1 after the last one.
inline Distribution piecewise_from_breakpoints(std::vector<Breakpoint> pts) {
    if (pts.empty()) throw ValidationError("piecewise: no breakpoints");
    constexpr double tol = 1e-12;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& b = pts[i];
        const std::string where = "piecewise: breakpoint " + std::to_string(i) + " (z=" +
                                  detail::fmt(b.z) + ")";
        if (!std::isfinite(b.z) || b.z < 0.0) throw ValidationError(where + " must be finite, >= 0");
        if (i > 0 && !(b.z > pts[i - 1].z)) throw ValidationError(where + " z not strictly increasing");
        if (!(b.left >= 0.0 && b.right <= 1.0 + tol)) {
            throw ValidationError(where + " has CDF values outside [0,1]");
        }
        if (b.left > b.right) throw ValidationError(where + " has F_left > F_right");
        if (i > 0 && b.left < pts[i - 1].right) throw ValidationError(where + " decreases the CDF");
    }
    if (pts.front().left != 0.0) {
        throw ValidationError("piecewise: breakpoint 0 must have F_left = 0");
    }
    if (std::fabs(pts.back().right - 1.0) > tol) {
        throw ValidationError("piecewise: last breakpoint must have F_right = 1");
    }
    pts.back().right = 1.0;
    for (auto& b : pts) b.right = std::min(b.right, 1.0);
    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        cum[i + 1] = cum[i] + 0.5 * (pts[i].right + pts[i + 1].left) * (pts[i + 1].z - pts[i].z);
    }
    return Distribution(PiecewiseCdf{std::move(pts), std::move(cum)});
}

inline Distribution empirical_from_samples(std::vector<double> xs) {
    if (xs.empty()) throw ValidationError("empirical: no samples");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || xs[i] < 0.0) {
            throw ValidationError("empirical: sample " + std::to_string(i) +
                                  " is negative or not finite");
        }
    }
    std::sort(xs.begin(), xs.end());
    std::vector<double> prefix(xs.size() + 1, 0.0);
    std::partial_sum(xs.begin(), xs.end(), prefix.begin() + 1);
    return Distribution(EmpiricalCdf{std::move(xs), std::move(prefix)});
}

inline Distribution make_vshaped(double a = 0.5, double b = 1.0, double width = 1.0) {
    if (!(a >= 0.0 && a < 1.0) || !(b > 0.0) || std::fabs(a + 0.5 * b - 1.0) > 1e-12) {
        throw ValidationError("vshaped: need 0 <= a < 1 and a + b/2 = 1, got a=" + detail::fmt(a) +
                              " b=" + detail::fmt(b));
    }
    if (!(width > 0.0) || std::isinf(width)) throw ValidationError("vshaped: width must be positive");
    return Distribution(VShapedDensity{a, b, width});
}

inline Distribution Distribution::scaled(double c) const {
    if (!(c > 0.0) || std::isinf(c)) throw ValidationError("scale factor must be positive");
    return std::visit(
        [c](const auto& d) -> Distribution {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return Distribution(Uniform{d.lo * c, d.hi * c});
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return Distribution(Exponential{d.rate / c});
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return Distribution(Pareto{d.shape, d.scale * c});
            } else if constexpr (std::is_same_v<T, Lognormal>) {
                return Distribution(Lognormal{d.mu + std::log(c), d.sigma});
            } else if constexpr (std::is_same_v<T, ScaledBernoulli>) {
                return Distribution(ScaledBernoulli{d.c * c, d.p});
            } else if constexpr (std::is_same_v<T, PiecewiseCdf>) {
                auto pts = d.pts;
                for (auto& b : pts) b.z *= c;
                return piecewise_from_breakpoints(std::move(pts));
            } else if constexpr (std::is_same_v<T, EmpiricalCdf>) {
                auto xs = d.xs;
                for (auto& x : xs) x *= c;
                return empirical_from_samples(std::move(xs));
            } else if constexpr (std::is_same_v<T, EqualityClustered>) {
                return Distribution(
                    EqualityClustered{d.q, d.a_star * c, d.beta, d.gamma / c, d.zeta * c});
            } else {
                return Distribution(VShapedDensity{d.a, d.b, d.width * c});
            }
        },
        v_);
}

inline std::string Distribution::describe() const {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            using detail::fmt;
            if constexpr (std::is_same_v<T, Uniform>) {
                return "Uniform(" + fmt(d.lo) + "," + fmt(d.hi) + ")";
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return "Exponential(rate=" + fmt(d.rate) + ")";
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return "Pareto(shape=" + fmt(d.shape) + ",scale=" + fmt(d.scale) + ")";
            } else if constexpr (std::is_same_v<T, Lognormal>) {
                return "Lognormal(mu=" + fmt(d.mu) + ",sigma=" + fmt(d.sigma) + ")";
            } else if constexpr (std::is_same_v<T, ScaledBernoulli>) {
                return fmt(d.c) + "*Ber(" + fmt(d.p) + ")";
            } else if constexpr (std::is_same_v<T, PiecewiseCdf>) {
                return "Piecewise(" + std::to_string(d.pts.size()) + " breakpoints)";
            } else if constexpr (std::is_same_v<T, EmpiricalCdf>) {
                return "Empirical(n=" + std::to_string(d.xs.size()) + ")";
            } else if constexpr (std::is_same_v<T, EqualityClustered>) {
                return "EqualityClustered(beta=" + fmt(d.beta) + ")";
            } else {
                return "VShaped(a=" + fmt(d.a) + ",b=" + fmt(d.b) + ")";
            }
        },
        v_);
}

}  // namespace dnv
