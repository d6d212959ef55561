#include "catch_amalgamated.hpp"

#include "dnv/adversary.hpp"
#include "dnv/clustered.hpp"

#include <cmath>

using namespace dnv;
using Catch::Approx;

namespace {

ClusterParams cp(double beta, double gamma, double zeta) { return {beta, gamma, zeta, std::nullopt}; }

std::vector<double> eps_grid() {
    std::vector<double> e;
    for (double x = 1e-4; x < 1.0; x *= 1.25) e.push_back(x);
    return e;
}

}  // namespace

TEST_CASE("verify_clustered examples") {
    const NewsvendorInstance u(0.5, make_uniform(0.0, 1.0));
    const auto r = verify_clustered(u, cp(0.0, 1.0, 0.5), 1001);
    CHECK(r.holds);
    CHECK(r.worst_ratio == Approx(1.0).epsilon(1e-12));
    CHECK(r.grid_size == 1001);
    CHECK(r.worst_point >= 0.0);
    CHECK(r.worst_point <= 1.0);

    const NewsvendorInstance e1(0.5, equality_clustered(0.5, 0.5, cp(1.0, 1.0, 0.5)));
    CHECK(verify_clustered(e1, cp(1.0, 1.0, 0.5), 1001).holds);
    CHECK_FALSE(verify_clustered(e1, cp(0.5, 1.0, 0.5), 1001).holds);

    for (double beta : {0.0, 1.0, 2.5}) {
        for (std::int64_t n : {4, 9, 100}) {
            const auto hp = hard_pair_additive(0.5, beta, 1.0, n);
            CHECK(verify_clustered(NewsvendorInstance(0.5, hp.P), hp.params, 2001).holds);
            CHECK(verify_clustered(NewsvendorInstance(0.5, hp.Q), hp.params, 2001).holds);
        }
    }
}

TEST_CASE("verify_clustered rejects infeasible parameters") {
    const NewsvendorInstance u(0.5, make_uniform(0.0, 1.0));
    CHECK_THROWS_AS(verify_clustered(u, cp(0.0, 1.0, 0.6), 101), ValidationError);
    CHECK_THROWS_AS(verify_clustered(u, cp(-0.5, 1.0, 0.1), 101), ValidationError);
    CHECK_THROWS_AS(verify_clustered(u, cp(0.0, 0.0, 0.1), 101), ValidationError);
    CHECK_THROWS_AS(verify_clustered(u, cp(0.0, 1.0, 0.0), 101), ValidationError);
    CHECK_THROWS_AS(verify_clustered(u, cp(0.0, 1.0, 0.1), 2), ValidationError);
    CHECK_THROWS_AS(verify_clustered(u, {0.0, 1.0, 0.25, 0.3}, 101), ValidationError);
    CHECK_NOTHROW(verify_clustered(u, {0.0, 1.0, 0.25, 0.25}, 101));
    const NewsvendorInstance q3(0.3, make_uniform(0.0, 1.0));
    CHECK(zeta_cap(0.3, 1.0, 2.0) == Approx(std::sqrt(0.3) / 2.0));
    CHECK_THROWS_AS(verify_clustered(q3, cp(1.0, 2.0, 0.28), 101), ValidationError);
}

TEST_CASE("verify_clustered with beta = infinity") {
    const NewsvendorInstance b(0.4, make_scaled_bernoulli(1.0, 0.45));
    // |a - a*| <= 1/gamma
    CHECK(verify_clustered(b, cp(kInf, 1.0, 1.0), 1001).holds);
    CHECK(verify_clustered(b, cp(kInf, 1.0, 1.0), 1001).worst_ratio == Approx(1.0));
    CHECK(verify_clustered(b, cp(kInf, 2.0, 0.5), 1001).holds);
    CHECK(zeta_cap(0.4, kInf, 2.0) == Approx(0.5));
    CHECK_THROWS_AS(verify_clustered(b, cp(kInf, 2.0, 0.6), 1001), ValidationError);
}

TEST_CASE("piecewise verification catches violations between grid points") {
    // a short steep rise to q right after a*: F is below the required curve
    // only on a window much narrower than the grid spacing
    const auto d = piecewise_from_breakpoints(
        {{0.0, 0.0, 0.0}, {1.0, 0.5, 0.5}, {1.0005, 0.5000001, 0.5000001}, {1.001, 0.5001, 0.5001}, {2.0, 1.0, 1.0}});
    const NewsvendorInstance inst(0.5, d);
    const auto r = verify_clustered(inst, cp(0.0, 0.1, 0.9), 3);
    CHECK_FALSE(r.holds);
    CHECK(r.worst_point > 1.0);
    CHECK(r.worst_point < 1.001);
}

TEST_CASE("check_tau examples") {
    const NewsvendorInstance u(0.5, make_uniform(0.0, 1.0));
    CHECK(check_tau(u, {0.0, 1.0, 0.25, 0.25}));
    CHECK_FALSE(check_tau(u, {0.0, 1.0, 0.25, 0.3}));
    CHECK_THROWS_AS(check_tau(u, cp(0.0, 1.0, 0.25)), ValidationError);
    for (double beta : {0.0, 1.0, kInf}) {
        for (std::int64_t n : {4, 25, 100}) {
            const auto hp = hard_pair_multiplicative(0.5, beta, 1.0, 0.1, 0.2, n);
            CHECK(check_tau(NewsvendorInstance(0.5, hp.P), hp.params));
            CHECK(check_tau(NewsvendorInstance(0.5, hp.Q), hp.params));
            CHECK(verify_clustered(NewsvendorInstance(0.5, hp.P), hp.params, 2001).holds);
            CHECK(verify_clustered(NewsvendorInstance(0.5, hp.Q), hp.params, 2001).holds);
        }
    }
}

TEST_CASE("delta_epsilon examples") {
    const NewsvendorInstance u(0.5, make_uniform(0.0, 1.0));
    CHECK(delta_epsilon(u, 0.1) == Approx(0.1));
    CHECK(delta_epsilon(u, 0.7) == Approx(0.5));
    CHECK(delta_epsilon(u, 0.5) == Approx(0.5));
    const NewsvendorInstance b(0.4, make_scaled_bernoulli(1.0, 0.45));
    CHECK(delta_epsilon(b, 0.1) == 0.0);
    CHECK(delta_epsilon(b, 0.2) == 1.0);
    const NewsvendorInstance e(0.9, make_exponential_mean(1.0));
    CHECK(delta_epsilon(e, 0.05) == Approx(std::log(0.1) - std::log(0.05)));
    CHECK(std::isinf(delta_epsilon(e, 0.5)));
    CHECK_THROWS_AS(delta_epsilon(u, 0.0), DomainError);
}

TEST_CASE("delta_epsilon is nondecreasing in eps") {
    const std::vector<std::pair<double, Distribution>> cases{
        {0.5, make_uniform(0.0, 1.0)},
        {0.9, make_exponential_mean(1.0)},
        {0.4, make_pareto(2.0, 1.0)},
        {0.9, make_lognormal(0.0, 1.5)},
        {0.4, make_scaled_bernoulli(23.0, 0.59)},
        {0.5, equality_clustered(0.5, 0.5, cp(2.0, 1.0, 0.5))},
        {0.3, make_vshaped()}};
    for (const auto& [q, d] : cases) {
        const NewsvendorInstance inst(q, d);
        double prev = 0.0;
        for (double eps : eps_grid()) {
            const double v = delta_epsilon(inst, eps);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("clustering implies the delta bound") {
    struct Case {
        double q;
        Distribution d;
        ClusterParams p;
    };
    std::vector<Case> cases{{0.5, make_uniform(0.0, 1.0), cp(0.0, 1.0, 0.5)},
                            {0.4, make_uniform(0.0, 1.0), cp(0.0, 1.0, 0.4)}};
    for (double beta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        cases.push_back({0.5, equality_clustered(0.5, 0.5, cp(beta, 1.0, 0.5)), cp(beta, 1.0, 0.5)});
    }
    for (double beta : {0.0, 1.0}) {
        const auto hp = hard_pair_additive(0.5, beta, 1.0, 25);
        cases.push_back({0.5, hp.P, hp.params});
        cases.push_back({0.5, hp.Q, hp.params});
    }
    for (const auto& c : cases) {
        const NewsvendorInstance inst(c.q, c.d);
        REQUIRE(verify_clustered(inst, c.p, 2001).holds);
        const double top = edge_gap(c.p);
        for (double eps : eps_grid()) {
            if (eps > top) break;
            INFO(c.d.describe() << " eps=" << eps);
            CHECK(delta_epsilon(inst, eps) <= std::pow(eps, 1.0 / (c.p.beta + 1.0)) / c.p.gamma * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("min_beta_proxy examples") {
    const NewsvendorInstance u(0.5, make_uniform(0.0, 1.0));
    CHECK(min_beta_proxy(u, 1.0, 0.5, 1001) == Approx(0.0).margin(1e-3));
    const NewsvendorInstance e2(0.5, equality_clustered(0.5, 0.5, cp(2.0, 1.0, 0.5)));
    CHECK(min_beta_proxy(e2, 1.0, 0.5, 1001) == Approx(2.0).margin(1e-3));

    // F stays at q to the right of a*: no beta works
    const auto flat = piecewise_from_breakpoints({{0.0, 0.0, 0.0}, {1.0, 0.5, 0.5}, {1.2, 0.5, 0.5}, {2.0, 1.0, 1.0}});
    std::string why;
    CHECK(std::isinf(min_beta_proxy(NewsvendorInstance(0.5, flat), 1.0, 0.5, 1001, &why)));
    CHECK_FALSE(why.empty());

    // a jump at a* with gamma*zeta = 1 leaves only beta = infinity
    const NewsvendorInstance b(0.4, make_scaled_bernoulli(1.0, 0.45));
    why.clear();
    CHECK(std::isinf(min_beta_proxy(b, 1.0, 1.0, 1001, &why)));
    CHECK_FALSE(why.empty());
    // with gamma*zeta < 1 the jump is bounded away from q and a finite beta exists
    const double fb = min_beta_proxy(b, 1.0, 0.5, 1001);
    CHECK(fb == Approx(std::log(0.15) / std::log(0.5) - 1.0).margin(1e-3));
}

TEST_CASE("equality construction round trip") {
    for (double beta : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const NewsvendorInstance inst(0.5, equality_clustered(0.5, 0.5, cp(beta, 1.0, 0.5)));
        INFO("beta=" << beta);
        const auto at = verify_clustered(inst, cp(beta, 1.0, 0.5), 1000);
        CHECK(at.holds);
        CHECK(at.worst_ratio == Approx(1.0).epsilon(1e-9));
        CHECK(min_beta_proxy(inst, 1.0, 0.5, 1000) == Approx(beta).margin(1e-3));
        if (beta >= 0.01) {
            CHECK_FALSE(verify_clustered(inst, cp(beta - 0.01, 1.0, 0.5), 1000).holds);
        } else {
            CHECK_THROWS_AS(verify_clustered(inst, cp(beta - 0.01, 1.0, 0.5), 1000), ValidationError);
        }
    }
    // off-centre instance whose edge gap is below min{q,1-q}
    const NewsvendorInstance off(0.3, equality_clustered(0.3, 2.0, cp(1.0, 1.0, 0.4)));
    CHECK(optimal_action(off) == Approx(2.0));
    CHECK(min_beta_proxy(off, 1.0, 0.4, 1000) == Approx(1.0).margin(1e-3));
}

TEST_CASE("equality construction shape") {
    const auto u = equality_clustered(0.5, 0.5, cp(0.0, 1.0, 0.5));
    for (double z : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) CHECK(u.cdf(z) == Approx(z).margin(1e-15));
    const auto d = equality_clustered(0.5, 0.5, cp(1.0, 1.0, 0.5));
    for (double t : {0.0, 0.1, 0.25, 0.4}) {
        CHECK(d.cdf(0.5 + t) == Approx(0.5 + t * t).margin(1e-15));
        CHECK(d.cdf(0.5 - t) == Approx(0.5 - t * t).margin(1e-15));
    }
    CHECK(d.cdf_left(1.0) == Approx(0.75));
    CHECK(d.cdf(1.0) == 1.0);
    CHECK(d.cdf(0.0) == Approx(0.25));
    CHECK(d.cdf_left(0.0) == 0.0);
    CHECK(d.mean() == Approx(0.5));

    CHECK_THROWS_AS(equality_clustered(0.5, 0.4, cp(1.0, 1.0, 0.5)), ValidationError);
    CHECK_THROWS_AS(equality_clustered(0.5, 0.5, cp(kInf, 1.0, 0.5)), ValidationError);
    CHECK_THROWS_AS(equality_clustered(0.3, 0.5, cp(0.0, 1.0, 0.5)), ValidationError);
}

TEST_CASE("fit_gamma yields the largest verified gamma") {
    for (double q : {0.4, 0.9}) {
        const NewsvendorInstance inst(q, make_exponential_mean(1.0));
        const double zeta = 0.5 * std::min(q, 1.0 - q);
        const double g = fit_gamma(inst, 0.0, zeta, 2001);
        CHECK(g > 0.0);
        CHECK(verify_clustered(inst, cp(0.0, g, zeta), 2001).holds);
        if (g * 1.01 <= zeta_cap(q, 0.0, 1.0) / zeta) {
            CHECK_FALSE(verify_clustered(inst, cp(0.0, g * 1.01, zeta), 2001).holds);
        }
    }
    const NewsvendorInstance u(0.5, make_uniform(0.0, 1.0));
    CHECK(fit_gamma(u, 0.0, 0.25, 2001) == Approx(1.0).epsilon(1e-8));
}
