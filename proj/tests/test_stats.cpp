#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>

#include <lagsim/stats.hpp>

#include "test_util.hpp"

using namespace lagsim;

namespace {

ModelParams gaussian2() {
    ModelParams m;
    m.family = Family::Gaussian;
    m.gamma = 1;
    m.d = 2;
    return m;
}

TessellationResult fixture_result(std::vector<Vec> centers, std::vector<char> flags) {
    TessellationResult T;
    T.centers = std::move(centers);
    T.extreme = std::move(flags);
    T.unbounded.assign(T.extreme.size(), 0);
    T.coverage.assign(T.extreme.size(), 0.0);
    T.certified.assign(T.extreme.size(), 0);
    return T;
}

}  // namespace

TEST_CASE("window count basics and monotonicity", "[stats]") {
    auto T = fixture_result({{0, 0}, {2, 0}, {-2, 0}, {0, 2}}, {1, 1, 0, 1});
    REQUIRE(f_n_count(T, Window{3, {}}).count == 3);
    REQUIRE(f_n_count(T, Window{1, {}}).count == 1);
    REQUIRE(f_n_count(T, Window{0.5, {50, 50}}).count == 0);
    // all counted seeds are unmarked => all uncertified
    REQUIRE(f_n_count(T, Window{3, {}}).uncertified == 3);
    T.certified = {1, 1, 1, 0};
    REQUIRE(f_n_count(T, Window{3, {}}).uncertified == 1);
    // monotone in the window
    for (double w : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        REQUIRE(f_n_count(T, Window{w, {}}).count <= f_n_count(T, Window{w + 0.5, {}}).count);
    }
}

TEST_CASE("window count on classification fixtures", "[stats]") {
    const double d2 = (1.0 / 16) * (1.0 / 16);
    const double ell = 1.0 / 8;
    SeedSet A, B;
    auto ring = [&](SeedSet& S, double scale, double h0, double hring) {
        S.seeds.push_back({{0, 0}, h0});
        for (int i = 0; i < 3; ++i) {
            const double th = M_PI / 2 + 2 * M_PI * i / 3;
            S.seeds.push_back({{scale * 3 * (1.0 / 16) * std::cos(th),
                                scale * 3 * (1.0 / 16) * std::sin(th)},
                               hring});
        }
    };
    ring(A, 4.0 / 3, ell - 9 * d2, ell - 18 * d2);
    ring(B, 2.0 / 3, ell, ell - 19 * d2);
    REQUIRE(f_n_count(classify(A), Window{1, {}}).count == 4);
    REQUIRE(f_n_count(classify(B), Window{1, {}}).count == 3);
}

TEST_CASE("variance scaling recovers exact power laws", "[stats]") {
    const std::vector<double> sizes = {4, 8, 16};
    std::vector<double> vars;
    for (double n : sizes) vars.push_back(n * n);
    auto r = variance_scaling(sizes, vars, 2);
    REQUIRE(r.defined);
    REQUIRE(r.slope == Catch::Approx(2.0).margin(1e-12));
    REQUIRE(r.stderr_ == Catch::Approx(0.0).margin(1e-10));
    for (double q : r.ratio) REQUIRE(q == Catch::Approx(1.0));

    std::vector<double> cubic;
    for (double n : sizes) cubic.push_back(0.5 * n * n * n);
    REQUIRE(variance_scaling(sizes, cubic, 2).slope == Catch::Approx(3.0).margin(1e-12));

    REQUIRE_FALSE(variance_scaling(sizes, {0.0, 1.0, 2.0}, 2).defined);
    REQUIRE_THROWS_AS(variance_scaling({4, 8}, {1, 2}, 2), std::invalid_argument);
}

TEST_CASE("normality diagnostics on reference samples", "[stats]") {
    SECTION("exact normal quantiles") {
        std::vector<double> q;
        const int R = 1000;
        for (int i = 0; i < R; ++i) q.push_back(statsdetail::normal_quantile((i + 0.5) / R));
        auto nd = normality_diagnostics(q);
        REQUIRE(nd.d_K <= 0.002);
        REQUIRE(nd.d_W <= 0.01);
    }
    SECTION("two-point sample") {
        std::vector<double> pm;
        for (int i = 0; i < 500; ++i) {
            pm.push_back(1);
            pm.push_back(-1);
        }
        auto nd = normality_diagnostics(pm);
        REQUIRE(nd.d_K == Catch::Approx(0.3412237).margin(1e-6));
    }
    SECTION("errors") {
        REQUIRE_THROWS_AS(normality_diagnostics(std::vector<double>(10, 1.0)),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(normality_diagnostics(std::vector<double>(64, 3.25)),
                          std::invalid_argument);
    }
    SECTION("affine invariance") {
        auto eng = make_engine(derive_stream(41, 1));
        std::normal_distribution<double> N(0, 1);
        std::vector<double> x(200);
        for (double& v : x) v = N(eng);
        auto base = normality_diagnostics(x);
        std::vector<double> y = x;
        for (double& v : y) v = 17.5 * v - 1234.0;
        auto scaled = normality_diagnostics(y);
        REQUIRE(scaled.d_K == Catch::Approx(base.d_K).margin(1e-12));
        REQUIRE(scaled.d_W == Catch::Approx(base.d_W).margin(1e-9));
    }
}

TEST_CASE("normal quantile inverts the cdf", "[stats]") {
    for (double p : {1e-9, 1e-6, 0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999, 1 - 1e-6}) {
        REQUIRE(statsdetail::normal_cdf(statsdetail::normal_quantile(p)) ==
                Catch::Approx(p).margin(1e-12));
    }
    REQUIRE(statsdetail::normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE_THROWS_AS(statsdetail::normal_quantile(0.0), std::invalid_argument);
}

TEST_CASE("tail survival curve basics", "[stats]") {
    const std::vector<double> grid = {0.0, 1.0, 2.0};
    auto all_neg = tail_survival({-inf, -inf, -inf}, grid);
    for (double p : all_neg.P) REQUIRE(p == 0.0);

    auto two = tail_survival({0.5, 1.5}, {1.0});
    REQUIRE(two.P.size() == 1);
    REQUIRE(two.P[0] == Catch::Approx(0.5));
    REQUIRE(two.wilson_lo[0] >= 0.0);
    REQUIRE(two.wilson_hi[0] <= 1.0);
    REQUIRE(two.wilson_lo[0] < 0.5);
    REQUIRE(two.wilson_hi[0] > 0.5);

    auto eng = make_engine(derive_stream(41, 2));
    std::exponential_distribution<double> E(1.0);
    std::vector<double> t(2000);
    for (double& v : t) v = E(eng);
    std::vector<double> g;
    for (int k = 0; k < 30; ++k) g.push_back(0.2 * k);
    auto curve = tail_survival(t, g);
    for (std::size_t k = 0; k + 1 < curve.P.size(); ++k) {
        REQUIRE(curve.P[k] >= curve.P[k + 1]);  // non-increasing
        REQUIRE(curve.P[k] >= 0.0);
        REQUIRE(curve.P[k] <= 1.0);
        REQUIRE(curve.wilson_lo[k] <= curve.P[k]);
        REQUIRE(curve.wilson_hi[k] >= curve.P[k]);
    }
}

TEST_CASE("experiment config validation", "[stats]") {
    ExperimentConfig cfg;
    cfg.model = gaussian2();
    cfg.sizes = {1, 2, 3};
    cfg.replications = 4;
    REQUIRE_NOTHROW(cfg.validate());
    cfg.replications = 1;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.replications = 4;
    cfg.sizes = {2, 2};
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.sizes = {3, 2};
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.sizes = {};
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("replications are deterministic and exchangeable", "[stats]") {
    ExperimentConfig cfg;
    cfg.model = gaussian2();
    cfg.sizes = {1, 1.5, 2};
    cfg.replications = 8;
    cfg.tol = 0.1;
    cfg.master_seed = 77;
    cfg.certify = false;

    auto a = run_replications(cfg);
    auto b = run_replications(cfg);
    for (std::size_t si = 0; si < a.per_n.size(); ++si) {
        REQUIRE(a.per_n[si].samples == b.per_n[si].samples);
        REQUIRE(a.per_n[si].mean == b.per_n[si].mean);
        REQUIRE(a.per_n[si].variance == b.per_n[si].variance);
    }
    // exchangeability: shuffling replicate order leaves every statistic alone
    for (auto& ps : b.per_n) {
        auto shuffled = ps.samples;
        std::mt19937_64 g(123);
        std::shuffle(shuffled.begin(), shuffled.end(), g);
        double mean = 0;
        for (double x : shuffled) mean += x;
        mean /= shuffled.size();
        double var = 0;
        for (double x : shuffled) var += (x - mean) * (x - mean);
        var /= (shuffled.size() - 1);
        REQUIRE(mean == Catch::Approx(ps.mean).margin(1e-9));
        REQUIRE(var == Catch::Approx(ps.variance).margin(1e-9));
    }
    // different master seed changes the draw
    cfg.master_seed = 78;
    auto c = run_replications(cfg);
    bool any_diff = false;
    for (std::size_t si = 0; si < a.per_n.size(); ++si)
        any_diff |= (a.per_n[si].samples != c.per_n[si].samples);
    REQUIRE(any_diff);
}

TEST_CASE("thread count does not change results", "[stats]") {
    ExperimentConfig cfg;
    cfg.model = gaussian2();
    cfg.sizes = {1, 1.5, 2};
    cfg.replications = 6;
    cfg.tol = 0.1;
    cfg.master_seed = 501;
    cfg.certify = true;
    cfg.cert_reps = 2;

    setenv("LAGUERRE_THREADS", "1", 1);
    auto serial = run_replications(cfg);
    setenv("LAGUERRE_THREADS", "4", 1);
    auto parallel = run_replications(cfg);
    unsetenv("LAGUERRE_THREADS");
    for (std::size_t si = 0; si < serial.per_n.size(); ++si) {
        REQUIRE(serial.per_n[si].samples == parallel.per_n[si].samples);
        REQUIRE(serial.per_n[si].mean_doubled == parallel.per_n[si].mean_doubled);
        REQUIRE(serial.per_n[si].uncertified_in_window ==
                parallel.per_n[si].uncertified_in_window);
    }
}

TEST_CASE("doubling certification smoke run", "[stats]") {
    ExperimentConfig cfg;
    cfg.model = gaussian2();
    cfg.sizes = {1, 2, 3};
    cfg.replications = 6;
    cfg.tol = 0.05;
    cfg.master_seed = 900;
    cfg.certify = true;
    cfg.cert_reps = 6;

    auto rs = run_replications(cfg);
    for (const auto& ps : rs.per_n) {
        REQUIRE(ps.doubled_reps == 6);
        REQUIRE(std::isfinite(ps.mean_doubled));
        // coupled doubling: counts should be close already at smoke scale
        REQUIRE(ps.doubling_rel_change < 0.5);
        REQUIRE(ps.anomalies == 0);
        // most in-window seeds certify at this tolerance
        REQUIRE(ps.certified_in_window > 4 * ps.uncertified_in_window);
    }
}

TEST_CASE("tail run collects certified coverage times", "[stats]") {
    TailRunConfig cfg;
    cfg.model = gaussian2();
    cfg.n = 2;
    cfg.replications = 8;
    cfg.tol = 0.05;
    cfg.master_seed = 31;
    auto tr = run_tails(cfg);
    REQUIRE(tr.samples.size() > 50);
    REQUIRE(tr.anomalies == 0);
    for (double t : tr.samples) REQUIRE(std::isfinite(t));
    for (std::size_t k = 0; k + 1 < tr.curve.P.size(); ++k)
        REQUIRE(tr.curve.P[k] >= tr.curve.P[k + 1]);
    // deterministic
    auto tr2 = run_tails(cfg);
    REQUIRE(tr.samples == tr2.samples);
}
