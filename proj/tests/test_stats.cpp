#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "selfsim/error.hpp"
#include "selfsim/fbm.hpp"
#include "selfsim/fim.hpp"
#include "selfsim/special.hpp"
#include "selfsim/stats.hpp"

using namespace selfsim;

namespace {

stats::Ensemble deterministic_ensemble(std::size_t paths) {
    const auto grid = TimeGrid::uniform(2.0, 40);
    stats::Ensemble e{stats::Model::Fbm, HurstExponent(0.5), grid, {}, 0};
    for (std::size_t i = 0; i < paths; ++i) {
        Trajectory tr{grid, {}};
        for (double t : grid.times()) tr.positions.push_back(t);
        e.paths.push_back(tr);
    }
    return e;
}

// Two-sample KS statistic by brute force over all pooled points.
double brute_force_d(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    double d = 0.0;
    for (double x : pooled) {
        const double fa = static_cast<double>(std::count_if(a.begin(), a.end(), [x](double v) { return v <= x; })) /
                          static_cast<double>(a.size());
        const double fb = static_cast<double>(std::count_if(b.begin(), b.end(), [x](double v) { return v <= x; })) /
                          static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

} // namespace

TEST_CASE("model names") {
    CHECK(stats::parse_model("fbm") == stats::Model::Fbm);
    CHECK(stats::parse_model("fim") == stats::Model::Fim);
    CHECK(stats::parse_model("dlp") == stats::Model::DlpMapped);
    CHECK(stats::to_string(stats::Model::DlpMapped) == "dlp");
    CHECK_THROWS_AS(stats::parse_model("bm"), DomainError);
}

TEST_CASE("empirical msd") {
    const auto e = deterministic_ensemble(3);
    const auto msd = stats::empirical_msd(e);
    REQUIRE(msd.size() == e.grid.size());
    for (const auto& pt : msd) CHECK(std::abs(pt.msd - pt.t * pt.t) < 1e-14);
    CHECK_THROWS_AS(stats::empirical_msd(deterministic_ensemble(0)), DomainError);

    const auto bm = stats::generate_ensemble(stats::Model::Fbm, HurstExponent(0.5), TimeGrid::uniform(1.0, 64), 10000, 5);
    for (const auto& pt : stats::empirical_msd(bm)) {
        if (pt.t == 0.0) continue;
        // Var of the squared displacement is 2t^2.
        CHECK(std::abs(pt.msd - pt.t) < 4.0 * std::sqrt(2.0) * pt.t / 100.0);
    }
}

TEST_CASE("power-law fit") {
    std::vector<stats::MsdPoint> curve;
    for (int k = 0; k <= 50; ++k) {
        const double t = 0.1 * k;
        curve.push_back({t, k == 0 ? 0.0 : 3.0 * std::pow(t, 1.2)});
    }
    const auto fit = stats::fit_power_law(curve);
    CHECK(std::abs(fit.c - 3.0) < 1e-12);
    CHECK(std::abs(fit.epsilon - 1.2) < 1e-12);
    CHECK(std::abs(fit.r_squared - 1.0) < 1e-12);

    CHECK_THROWS_AS(stats::fit_power_law(std::vector<stats::MsdPoint>{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}), DomainError);
    CHECK_THROWS_AS(stats::fit_power_law(std::vector<stats::MsdPoint>{{1.0, 1.0}, {2.0, 0.0}, {3.0, 3.0}},
                                         stats::FitOptions{0.0}),
                    DomainError);

    const auto fbm_e = stats::generate_ensemble(stats::Model::Fbm, HurstExponent(0.25), TimeGrid::uniform(1.0, 256),
                                                10000, 6);
    CHECK(std::abs(stats::fit_power_law(stats::empirical_msd(fbm_e)).epsilon - 0.5) < 0.05);
}

TEST_CASE("empirical cv score") {
    CHECK(std::abs(stats::empirical_cv_score(std::vector<double>(10, 2.5))) < 1e-15);
    std::vector<double> w{0.3, 1.7, 2.2, 0.01, 5.0, 0.9};
    std::vector<double> scaled(w);
    for (auto& v : scaled) v *= 17.0;
    CHECK(std::abs(stats::empirical_cv_score(w) - stats::empirical_cv_score(scaled)) < 1e-15);
    CHECK_THROWS_AS(stats::empirical_cv_score(std::vector<double>{0.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(stats::empirical_cv_score(std::vector<double>{1.0}), DomainError);

    RngStream s(8, 8);
    std::vector<double> z(100000);
    for (auto& v : z) v = std::abs(fim::sample_marginal(HurstExponent(0.5), 1.0, s));
    CHECK(std::abs(stats::empirical_cv_score(z) - (1.0 - 2.0 / std::numbers::pi)) < 0.01);
}

TEST_CASE("Kolmogorov distribution") {
    CHECK(std::abs(stats::kolmogorov_survival(1.3581) - 0.05) < 1e-4);
    CHECK(std::abs(stats::kolmogorov_survival(1.6276) - 0.01) < 1e-4);
    CHECK(stats::kolmogorov_survival(0.0) == 1.0);
    CHECK(stats::kolmogorov_survival(10.0) < 1e-80);
}

TEST_CASE("one-sample KS test") {
    int passed = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        RngStream s(9, rep);
        std::vector<double> u(200);
        for (auto& v : u) v = s.uniform();
        if (stats::ks_statistic(u, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 0.01) ++passed;
    }
    CHECK(passed >= 98);

    const auto z = gaussian_stream(RngStream(10, 0), 10000);
    CHECK(stats::ks_statistic(z, [](double x) { return fim::cdf(HurstExponent(0.5), 1.0, x); }).p_value > 0.01);
    CHECK(stats::ks_statistic(z, [](double x) { return fim::cdf(HurstExponent(0.25), 1.0, x); }).p_value < 0.001);

    CHECK_THROWS_AS(stats::ks_statistic(z, [](double x) { return std::sin(x); }), DomainError);
    CHECK_THROWS_AS(stats::ks_statistic(std::vector<double>(5, 0.1), normal_cdf), DomainError);

    // Statistic of a tiny hand-checkable sample.
    const std::vector<double> pts{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
    CHECK(std::abs(stats::ks_statistic(pts, [](double x) { return std::clamp(x, 0.0, 1.0); }).statistic - 0.1) < 1e-12);
}

TEST_CASE("two-sample KS test") {
    const auto a = gaussian_stream(RngStream(12, 0), 300);
    auto b = gaussian_stream(RngStream(12, 1), 450);
    CHECK(std::abs(stats::ks_two_sample(a, b).statistic - brute_force_d(a, b)) < 1e-12);
    CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
    for (auto& v : b) v += 0.5;
    CHECK(std::abs(stats::ks_two_sample(a, b).statistic - brute_force_d(a, b)) < 1e-12);
    CHECK(stats::ks_two_sample(a, b).p_value < 0.001);
}

TEST_CASE("Jarque-Bera normality test") {
    CHECK(stats::jarque_bera(gaussian_stream(RngStream(13, 0), 10000)).p_value > 0.01);
    RngStream s(13, 1);
    std::vector<double> e(10000);
    for (auto& v : e) v = -std::log(s.uniform());
    CHECK(stats::jarque_bera(e).p_value < 1e-6);
}

TEST_CASE("KL quadrature") {
    const fbm::Params p(HurstExponent(0.75));
    const auto g2 = stats::Density::from_pdf([&](double x) { return fbm::density(p, 2.0, x); });
    CHECK(std::abs(stats::kl_quadrature(g2, g2)) < 1e-8);
    const auto g1 = stats::Density::from_pdf([&](double x) { return fbm::density(p, 1.0, x); });
    CHECK(std::abs(stats::kl_quadrature(g2, g1) - fbm::kl(HurstExponent(0.75), 2.0)) < 1e-6);

    const HurstExponent h(0.75);
    const auto f2 = stats::Density::from_log_pdf([&](double x) { return fim::log_density(h, 2.0, x); });
    const auto f1 = stats::Density::from_log_pdf([&](double x) { return fim::log_density(h, 1.0, x); });
    CHECK(std::abs(stats::kl_quadrature(f2, f2, h)) < 1e-8);
    CHECK(std::abs(stats::kl_quadrature(f2, f1, h) - fim::kl(h, 2.0)) < 1e-6);
    CHECK(std::abs(stats::kl_quadrature(f2, f1, h) - 0.0767132) < 1e-6);

    // A divergent KL (heavy-tailed numerator, light denominator) cannot converge.
    const auto cauchy = stats::Density::from_pdf([](double x) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); });
    const auto gauss = stats::Density::from_pdf([](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); });
    CHECK_THROWS_AS(stats::kl_quadrature(cauchy, gauss, std::nullopt, {1e-10, 200}), ConvergenceError);
}

TEST_CASE("ensemble estimators") {
    const auto e = stats::generate_ensemble(stats::Model::Fbm, HurstExponent(0.5), TimeGrid::uniform(1.0, 8), 2000, 3);
    CHECK_THROWS_AS(stats::increment_covariance(e, {0.0, 0.5}, {0.25, 0.75}), DomainError);
    CHECK_THROWS_AS(stats::increment_variance(e, {0.5, 0.5}), DomainError);
    CHECK_THROWS(stats::values_at(e, 0.3));
    const auto v = stats::increment_variance(e, {0.25, 0.75});
    CHECK(std::abs(v.value - 0.5) < 4.0 * v.standard_error);
    const auto c = stats::position_covariance(e, 0.5, 1.0);
    CHECK(std::abs(c.value - 0.5) < 4.0 * c.standard_error);

    const auto again = stats::generate_ensemble(stats::Model::Fbm, HurstExponent(0.5), TimeGrid::uniform(1.0, 8), 2000, 3);
    CHECK(stats::increment_variance(again, {0.25, 0.75}).value == v.value);
}

TEST_CASE("ensemble generation") {
    const auto grid = TimeGrid::uniform(1.0, 32);
    for (auto m : {stats::Model::Fbm, stats::Model::Fim, stats::Model::DlpMapped}) {
        const auto a = stats::generate_ensemble(m, HurstExponent(0.35), grid, 5, 99);
        const auto b = stats::generate_ensemble(m, HurstExponent(0.35), grid, 5, 99);
        CHECK_NOTHROW(a.validate());
        CHECK(a.paths.size() == 5);
        CHECK(a.seed == 99);
        for (std::size_t i = 0; i < 5; ++i) CHECK(a.paths[i].positions == b.paths[i].positions);
        CHECK(a.paths[0].positions != a.paths[1].positions);
    }
    CHECK_THROWS_AS(stats::generate_ensemble(stats::Model::Fim, HurstExponent(0.3), TimeGrid({0.0, 0.1, 0.5}), 2, 1),
                    DomainError);
}

TEST_CASE("tail ratio table") {
    const std::vector<double> levels{2.0, 4.0, 8.0, 16.0};
    for (const auto& row : stats::tail_ratio_table(HurstExponent(0.5), 3.0, levels)) {
        CHECK(row.log_fbm_vs_bm == 0.0);
        CHECK(std::abs(row.log_fim_vs_bm) < 1e-12);
    }
    const auto rows = stats::tail_ratio_table(HurstExponent(0.25), 1.0, levels);
    std::vector<double> fim_vs_bm, fim_vs_fbm;
    for (const auto& r : rows) {
        fim_vs_bm.push_back(r.log_fim_vs_bm);
        fim_vs_fbm.push_back(r.log_fim_vs_fbm);
        CHECK(std::isfinite(r.log_fim_vs_fbm));
    }
    CHECK(stats::trend(fim_vs_bm) == stats::Trend::Decreasing);
    CHECK(stats::trend(fim_vs_fbm) == stats::Trend::Decreasing);
    CHECK_THROWS_AS(stats::tail_ratio_table(HurstExponent(0.25), 1.0, std::vector<double>{4.0, 2.0}), DomainError);
}

TEST_CASE("divergence ratio table") {
    const std::vector<double> times{10.0, 1e2, 1e3, 1e4, 1e5, 1e6};
    for (const auto& r : stats::divergence_ratio_table(HurstExponent(0.5), times)) {
        CHECK(std::abs(r.fbm_vs_bm - 1.0) < 1e-12);
    }
    for (double hv : {0.25, 0.75}) {
        const auto rows = stats::divergence_ratio_table(HurstExponent(hv), times);
        CHECK(std::abs(rows.back().fim_vs_bm / (2.0 * (1.0 - hv)) - 1.0) < 0.01);
        std::vector<double> fim_vs_fbm;
        for (const auto& r : rows) fim_vs_fbm.push_back(r.fim_vs_fbm);
        // KL_fim/KL_fbm behaves like 2(1-H) t^{1-2H}.
        CHECK(stats::trend(fim_vs_fbm) == (hv < 0.5 ? stats::Trend::Increasing : stats::Trend::Decreasing));
    }
    CHECK(stats::fim_bm_divergence_limit(HurstExponent(0.75)) == 0.5);
    CHECK_THROWS_AS(stats::divergence_ratio_table(HurstExponent(0.3), std::vector<double>{0.5, 2.0}), DomainError);
}

TEST_CASE("trend classification") {
    CHECK(stats::trend(std::vector<double>{1, 2, 3}) == stats::Trend::Increasing);
    CHECK(stats::trend(std::vector<double>{3, 2, 1}) == stats::Trend::Decreasing);
    CHECK(stats::trend(std::vector<double>{2, 2, 2}) == stats::Trend::Constant);
    CHECK(stats::trend(std::vector<double>{1.5, 1.5 * (1 + 1e-15), 1.5}) == stats::Trend::Constant);
    CHECK(stats::trend(std::vector<double>{1, 3, 2}) == stats::Trend::Mixed);
    CHECK(stats::trend(std::vector<double>{1, 1, 2}) == stats::Trend::Mixed);
}
