#include "catch_amalgamated.hpp"

#include "dnv/harness/config.hpp"
#include "dnv/harness/tables.hpp"

#include "oracles.hpp"

#include <cmath>
#include <filesystem>
#include <numeric>

using namespace dnv;
using namespace dnv::harness;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.distributions = {{"ber", make_scaled_bernoulli(1.0, 0.45), {0.4}},
                         {"expo", make_exponential_mean(1.0), {}},
                         {"unif", make_uniform(0.0, 1.0), {}}};
    cfg.q_values = {0.4, 0.9};
    cfg.n_grid = {1, 5, 20};
    cfg.reps = 400;
    return cfg;
}

}  // namespace

TEST_CASE("order statistic is the ceil(reps*p)-th smallest") {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    std::reverse(v.begin(), v.end());
    CHECK(order_statistic(v, 0.95) == 95.0);
    CHECK(order_statistic(v, 0.951) == 96.0);
    CHECK(order_statistic(v, 1e-9) == 1.0);
    CHECK(order_statistic({7.0}, 0.5) == 7.0);
}

TEST_CASE("summary statistics") {
    const std::vector<double> r{0.0, 1.0, 2.0, 3.0};
    const auto s = summarize("x", 0.5, 3, r, 0.5);
    CHECK(s.mean_regret == 1.5);
    CHECK_THAT(s.std_error, WithinRel(std::sqrt((5.0 / 3.0) / 4.0), 1e-15));
    CHECK(s.percentile_regret == 1.0);
    CHECK(s.reps == 4);
}

TEST_CASE("cell seeds separate cells and repetitions") {
    const auto a = cell_seed(1, "a", 0.4, 10, 0);
    CHECK(a == cell_seed(1, "a", 0.4, 10, 0));
    CHECK(a != cell_seed(1, "a", 0.4, 10, 1));
    CHECK(a != cell_seed(1, "b", 0.4, 10, 0));
    CHECK(a != cell_seed(1, "a", 0.9, 10, 0));
    CHECK(a != cell_seed(1, "a", 0.4, 11, 0));
    CHECK(a != cell_seed(2, "a", 0.4, 10, 0));
}

TEST_CASE("Bernoulli sweep cell agrees with enumeration") {
    SweepConfig cfg;
    cfg.distributions = {{"ber", make_scaled_bernoulli(1.0, 0.45), {0.4}}};
    cfg.n_grid = {10};
    cfg.reps = 10000;
    const auto rows = run_regret_sweep(cfg);
    REQUIRE(rows.size() == 1);
    const double truth = oracle::discrete_expected_regret({{0.0, 0.55}, {1.0, 0.45}}, 0.4, 10);
    CHECK_THAT(truth, WithinAbs(0.0152992, 5e-7));
    REQUIRE(rows[0].exact_expected);
    CHECK_THAT(*rows[0].exact_expected, WithinRel(truth, 1e-10));
    CHECK(std::fabs(rows[0].mean_regret - truth) <= 3.0 * rows[0].std_error);
    // regret takes only the two values 0 and L(1) - L(a*)
    CHECK((rows[0].percentile_regret == 0.0 || rows[0].percentile_regret > 0.05));
}

TEST_CASE("a point mass has zero regret at every n") {
    SweepConfig cfg;
    cfg.distributions = {{"atom", empirical_from_samples({3.0, 3.0}), {}}};
    cfg.n_grid = default_n_grid();
    cfg.reps = 50;
    for (const auto& r : run_regret_sweep(cfg)) {
        CHECK(r.mean_regret == 0.0);
        CHECK(r.percentile_regret == 0.0);
        CHECK(r.std_error == 0.0);
        CHECK(*r.exact_expected == 0.0);
    }
}

TEST_CASE("sweep output is independent of the worker count") {
    auto cfg = small_config();
    cfg.threads = 1;
    const auto one = sweep_table(run_regret_sweep(cfg)).str();
    cfg.threads = 4;
    const auto four = sweep_table(run_regret_sweep(cfg)).str();
    CHECK(one == four);
    CHECK(sweep_table(run_regret_sweep(cfg)).str() == four);
    cfg.master_seed += 1;
    CHECK(sweep_table(run_regret_sweep(cfg)).str() != four);
}

TEST_CASE("sweep rows are sorted by label, q and n") {
    auto cfg = small_config();
    cfg.n_grid = {20, 1, 5};
    const auto rows = run_regret_sweep(cfg);
    REQUIRE(rows.size() == 1 * 3 + 2 * 3 + 2 * 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::tie(rows[i - 1].label, rows[i - 1].q, rows[i - 1].n) <
              std::tie(rows[i].label, rows[i].q, rows[i].n));
    }
    CHECK(rows.front().label == "ber");
}

TEST_CASE("sweep configuration is validated") {
    auto cfg = small_config();
    CHECK_NOTHROW(validate(cfg));
    auto bad = cfg;
    bad.reps = 0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = cfg;
    bad.percentile = 1.0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = cfg;
    bad.n_grid.clear();
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = cfg;
    bad.n_grid = {0};
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = cfg;
    bad.distributions.clear();
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = cfg;
    bad.q_values = {1.0};
    CHECK_THROWS_AS(validate(bad), ValidationError);
    CHECK_THROWS_AS(parse_distribution(json::parse(R"({"family": "pareto", "shape": 1})")), ValidationError);
}

TEST_CASE("the mean cap admits the hard Bernoulli and nothing much larger") {
    SweepConfig cfg;
    cfg.distributions = {{"hard", make_scaled_bernoulli(127.0, 0.11), {0.9}}};
    CHECK_NOTHROW(validate(cfg));
    cfg.distributions = {{"harder", make_scaled_bernoulli(128.0, 0.11), {0.9}}};
    CHECK_THROWS_AS(validate(cfg), ValidationError);
    cfg.mean_cap = 20.0;
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("delta sweep") {
    const std::vector<LabeledDistribution> d{{"uniform", make_uniform(0.0, 1.0), {}},
                                             {"lognormal", make_lognormal(0.0, 1.5), {}}};
    SECTION("uniform at the median") {
        const auto rows = run_delta_sweep(d, {0.5}, {0.1, 0.5, 0.8});
        REQUIRE(rows.size() == 6);
        CHECK_THAT(rows[0].delta, WithinAbs(0.1, 1e-12));
        CHECK_THAT(rows[0].inv_eps2, WithinRel(100.0, 1e-12));
        CHECK_THAT(rows[1].delta, WithinAbs(0.5, 1e-12));
        CHECK_THAT(rows[2].delta, WithinAbs(0.5, 1e-12));
    }
    SECTION("lognormal spreads more than uniform at q = 0.9") {
        const auto rows = run_delta_sweep(d, {0.9}, default_eps_grid());
        const auto g = default_eps_grid().size();
        REQUIRE(rows.size() == 2 * g);
        for (std::size_t i = 0; i < g; ++i) {
            CHECK(rows[g + i].delta > rows[i].delta);
            CHECK(rows[g + i].eps == rows[i].eps);
        }
    }
    SECTION("clamped at eps >= max(q, 1-q)") {
        const auto r = run_delta_sweep({{"uniform", make_uniform(0.0, 1.0), {}}}, {0.9}, {0.9, 2.0});
        CHECK_THAT(r[0].delta, WithinAbs(0.9, 1e-12));
        CHECK_THAT(r[1].delta, WithinAbs(0.9, 1e-12));
    }
    CHECK_THROWS_AS(run_delta_sweep(d, {0.5}, {0.1, 0.0}), ValidationError);
}

TEST_CASE("bound check on verified instances") {
    BoundCheckConfig cfg;
    const ClusterParams p1{1.0, 1.0, 0.5, std::nullopt};
    cfg.cases = {{"eq1", equality_clustered(0.5, 0.5, p1), 0.5, p1},
                 {"ber", make_scaled_bernoulli(1.0, 0.45), 0.4, {kInf, 1.0, 1.0, std::nullopt}},
                 {"false_claim", make_uniform(0.0, 1.0), 0.5, {0.0, 2.0, 0.25, std::nullopt}}};
    cfg.n_grid = {2, 50, 2000};
    cfg.reps = 2000;
    const auto rows = run_bound_check(cfg);
    REQUIRE(rows.size() == 7);
    int applicable = 0;
    int not_applicable = 0;
    for (const auto& r : rows) {
        if (r.label == "false_claim") {
            CHECK(r.skipped);
            CHECK_FALSE(r.note.empty());
            continue;
        }
        CHECK_FALSE(r.skipped);
        CHECK_FALSE(r.exp_violation);
        CHECK_FALSE(r.hp_violation);
        CHECK(r.exact_expected < r.exp_add);
        if (r.hp_applicable) {
            ++applicable;
            CHECK(r.percentile_regret < r.hp_add);
        } else {
            ++not_applicable;
            CHECK(r.n < r.hp_min_n);
        }
    }
    CHECK(applicable > 0);
    CHECK(not_applicable > 0);
    const auto t = bound_check_table(rows);
    CHECK(t.size() == rows.size());
}

TEST_CASE("the V-shaped counterexample") {
    const auto red = make_vshaped(0.5, 1.0);
    for (double zeta : {0.01, 0.1, 0.25, 0.5}) {
        CHECK_THAT(min_density(red, 0.5, zeta), WithinAbs(0.5, 1e-12));
        CHECK_THAT(min_density(make_uniform(0.0, 1.0), 0.5, zeta), WithinAbs(1.0, 1e-12));
    }
    for (double t = 0.0; t <= 0.5; t += 0.03125) {
        CHECK_THAT(red.cdf(0.5 + t), WithinAbs(0.5 + 0.5 * t + t * t, 1e-14));
        CHECK_THAT(red.cdf(0.5 - t), WithinAbs(0.5 - 0.5 * t - t * t, 1e-14));
    }
    CHECK_THROWS_AS(make_vshaped(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(make_vshaped(0.5, 0.5), ValidationError);

    const auto tables = run_minpdf_counterexample({1, 10, 50}, 300, 7);
    CHECK(tables.regret.size() == 6);
    CHECK(tables.min_pdf.size() == 20);
    for (const auto& r : tables.min_pdf) {
        CHECK_THAT(r.min_density, WithinAbs(r.label == "red" ? 0.5 : 1.0, 1e-12));
        CHECK_THAT(r.inv_min_density * r.min_density, WithinAbs(1.0, 1e-15));
    }
    CHECK(tables.delta.size() == 2 * default_eps_grid().size());
}

TEST_CASE("CSV formatting") {
    SweepResult r;
    r.label = "a,b";
    r.q = 0.1;
    r.n = 5;
    r.mean_regret = 1.0 / 3.0;
    r.percentile_regret = 0.0;
    r.std_error = 0.01;
    r.reps = 10;
    const auto text = sweep_table({r}).str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.rfind("label,q,n,mean_regret,percentile_regret,std_error,reps,exact_expected,log_clamped,seed\n", 0) == 0);
    CHECK(text.find("\"a,b\",0.1,5,0.3333333333333333,0,0.01,10,,1,0\n") != std::string::npos);
    r.percentile_regret = 1e-3;
    CHECK(sweep_table({r}).rows()[0][8] == "0");
    r.exact_expected = 0.0;
    CHECK(sweep_table({r}).rows()[0][8] == "1");
    CHECK(sweep_table({r}, 0.0).rows()[0][8] == "0");

    CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
    CHECK(format_double(kInf) == "inf");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CsvTable t({"a", "b"});
    CHECK_THROWS_AS(t.add_row({"1"}), IoError);
}

TEST_CASE("file output") {
    const auto dir = std::filesystem::temp_directory_path() / "dnv_test_harness";
    std::filesystem::remove_all(dir);
    write_text(dir / "sub" / "x.csv", "a\n1\n");
    CHECK(std::filesystem::file_size(dir / "sub" / "x.csv") == 4);
    std::filesystem::create_directories(dir / "blocker");
    try {
        write_text(dir / "blocker", "x");
        FAIL("expected an I/O error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("blocker") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("SVG chart uses a log axis with a floor") {
    ChartSpec spec{"t", "n", "regret", false, 1e-12};
    const auto svg = render_svg(spec, {{"s", {{1.0, 0.1}, {2.0, 0.0}, {3.0, 1e-5}}}});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("1e-12") != std::string::npos);
}

TEST_CASE("config parsing") {
    const auto j = json::parse(R"({
        "distributions": [
            {"label": "u", "family": "uniform", "lo": 0, "hi": 2},
            {"label": "b", "family": "scaled_bernoulli", "c": 3, "p": 0.25, "q_values": [0.9]},
            {"label": "e", "family": "equality_clustered", "q": 0.5, "a_star": 0.5,
             "beta": 1, "gamma": 1, "zeta": 0.5},
            {"label": "pw", "family": "piecewise", "breakpoints": [[0, 0, 0.2], [1, 1, 1]]},
            {"family": "exponential", "mean": 2, "scale": 0.5}
        ],
        "grids": {"q": [0.3], "n": {"start": 1, "stop": 200, "step": 5}, "reps": 77,
                  "percentile": 0.9, "eps": [0.1]},
        "cluster_params": [{"label": "b", "q": 0.9, "beta": "inf", "gamma": 3, "zeta": 3}],
        "outputs": {"dir": "o", "format": "svg", "seed": 99, "exact": false}
    })");
    const auto cfg = parse_run_config(j);
    REQUIRE(cfg.sweep.distributions.size() == 5);
    CHECK(cfg.sweep.distributions[0].dist.cdf(1.0) == 0.5);
    CHECK(cfg.sweep.distributions[1].q_values == std::vector<double>{0.9});
    CHECK_THAT(cfg.sweep.distributions[1].dist.mean(), WithinRel(0.75, 1e-15));
    CHECK_THAT(cfg.sweep.distributions[2].dist.cdf(0.75), WithinAbs(0.5 + 0.25 * 0.25, 1e-12));
    CHECK_THAT(cfg.sweep.distributions[3].dist.cdf(0.5), WithinAbs(0.6, 1e-15));
    CHECK(cfg.sweep.distributions[4].label == "exponential");
    CHECK_THAT(cfg.sweep.distributions[4].dist.mean(), WithinRel(1.0, 1e-12));
    CHECK(cfg.sweep.q_values == std::vector<double>{0.3});
    CHECK(cfg.sweep.n_grid == default_n_grid());
    CHECK(cfg.sweep.reps == 77);
    CHECK(cfg.bound_check.reps == 77);
    CHECK(cfg.sweep.percentile == 0.9);
    CHECK(cfg.eps_grid == std::vector<double>{0.1});
    REQUIRE(cfg.clustered.size() == 1);
    CHECK(std::isinf(cfg.clustered[0].params.beta));
    CHECK(cfg.out_dir == "o");
    CHECK(cfg.format == "svg");
    CHECK(cfg.sweep.master_seed == 99);
    CHECK(cfg.bound_check.master_seed == 99);
    CHECK_FALSE(cfg.sweep.exact);

    CHECK(default_n_grid().size() == 41);
    CHECK(default_n_grid()[1] == 5);
    CHECK(default_n_grid().back() == 200);

    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"distributions": [{"family": "cauchy"}]})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"distributions": [{"lo": 1}]})")), ValidationError);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"distributions": [{"family": "pareto"}]})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"cluster_params": [{"label": "zz", "q": 0.5,
                    "beta": 0, "gamma": 1, "zeta": 0.1}]})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_run_config(json::parse("[1]")), ValidationError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/cfg.json"), IoError);
}

TEST_CASE("default configuration") {
    const auto cfg = default_run_config();
    CHECK_NOTHROW(validate(cfg.sweep));
    CHECK(cfg.sweep.reps == 10000);
    CHECK(cfg.sweep.q_values == std::vector<double>{0.4, 0.9});
    CHECK(cfg.clustered.size() >= 10);
    for (const auto& c : cfg.clustered) {
        INFO(c.label);
        CHECK(c.dist.mean() <= 1.0);
        CHECK(verify_clustered(NewsvendorInstance(c.q, c.dist), c.params, cfg.verify_grid).holds);
    }
}
