#include <doctest.h>

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

#include "selfsim/error.hpp"
#include "selfsim/fbm.hpp"
#include "selfsim/fim.hpp"
#include "selfsim/quadrature.hpp"
#include "selfsim/special.hpp"
#include "selfsim/stats.hpp"
#include "test_support.hpp"

using namespace selfsim;
using selfsim::testing::moments;

namespace {

std::vector<double> column(const std::vector<Trajectory>& paths, std::size_t k) {
    std::vector<double> v;
    v.reserve(paths.size());
    for (const auto& p : paths) v.push_back(p.positions[k]);
    return v;
}

double sample_cov(const std::vector<double>& a, const std::vector<double>& b, double* se) {
    const double n = static_cast<double>(a.size());
    const double ma = moments(a).mean, mb = moments(b).mean;
    std::vector<double> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
    const auto m = moments(prod);
    *se = m.standard_error;
    return m.mean * n / (n - 1.0);
}

} // namespace

TEST_CASE("fbm params validate the scale") {
    CHECK_THROWS_AS(fbm::Params(HurstExponent(0.5), 0.0), DomainError);
    CHECK_THROWS_AS(fbm::Params(HurstExponent(0.5), -1.0), DomainError);
    CHECK(fbm::Params(HurstExponent(0.3)).var_b1 == 1.0);
}

TEST_CASE("fbm covariance") {
    const fbm::Params bm(HurstExponent(0.5));
    CHECK(std::abs(fbm::covariance(bm, 3.0, 5.0) - 3.0) < 1e-14);
    for (double h : {0.1, 0.25, 0.75, 0.9}) {
        const fbm::Params p(HurstExponent(h), 2.0);
        CHECK(fbm::covariance(p, 0.0, 1.7) == 0.0);
        CHECK(fbm::covariance(p, 0.4, 1.7) == fbm::covariance(p, 1.7, 0.4));
        CHECK(std::abs(fbm::covariance(p, 1.3, 1.3) - 2.0 * std::pow(1.3, 2 * h)) < 1e-14);
    }
    const fbm::Params p(HurstExponent(0.75));
    CHECK(std::abs(fbm::covariance(p, 1.0, 2.0) - 0.5 * std::pow(2.0, 1.5)) < 1e-14);
    CHECK(std::abs(fbm::covariance(p, 1.0, 2.0) - 1.4142136) < 1e-7);
    CHECK_THROWS_AS(fbm::covariance(p, -1.0, 2.0), DomainError);
}

TEST_CASE("fbm kernel") {
    const HurstExponent half(0.5);
    CHECK(fbm::kernel(half, 2.0, 0.0) == 1.0);
    CHECK(fbm::kernel(half, 2.0, 1.5) == 1.0);
    CHECK(fbm::kernel(half, 2.0, -3.0) == 0.0);
    CHECK(std::abs(fbm::kernel(HurstExponent(0.75), 1.0, 0.75) - 0.7071068) < 1e-7);
    CHECK(std::abs(fbm::kernel(HurstExponent(0.25), 1.0, -1.0) - (std::pow(2.0, -0.25) - 1.0)) < 1e-14);
    CHECK(std::abs(fbm::kernel(HurstExponent(0.25), 1.0, -1.0) + 0.1591035) < 1e-7);
    CHECK_THROWS_AS(fbm::kernel(half, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(fbm::kernel(half, 1.0, 2.0), DomainError);
    CHECK_THROWS_AS(fbm::kernel(half, 0.0, -1.0), DomainError);
}

TEST_CASE("fbm density") {
    const fbm::Params bm(HurstExponent(0.5));
    CHECK(std::abs(fbm::density(bm, 1.0, 0.0) - 1.0 / std::sqrt(2.0 * std::numbers::pi)) < 1e-15);
    CHECK(std::abs(fbm::density(bm, 1.0, 0.0) - 0.3989423) < 1e-7);
    for (double h : {0.25, 0.75}) {
        const fbm::Params p{HurstExponent(h)};
        for (double x : {0.1, 0.7, 2.3, 5.0}) CHECK(fbm::density(p, 2.0, x) == fbm::density(p, 2.0, -x));
        const auto mass = quad::integrate_real_line([&](double x) { return fbm::density(p, 2.0, x); });
        CHECK(std::abs(mass.value - 1.0) < 1e-8);
    }
    CHECK_THROWS_AS(fbm::density(bm, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(fbm::density(bm, -1.0, 1.0), DomainError);
}

TEST_CASE("fbm cv score") {
    CHECK(std::abs(fbm::cv_score() - (1.0 - 2.0 / std::numbers::pi)) < 1e-15);
    CHECK(std::abs(fbm::cv_score() - 0.3633802) < 1e-7);
    CHECK(std::abs(fbm::cv_score() - fim::cv_score(HurstExponent(0.5))) < 1e-15);
    for (double h : {0.2, 0.8}) {
        const fbm::CholeskyGenerator gen(fbm::Params(HurstExponent(h)), TimeGrid({0.0, 0.5, 1.0}));
        std::vector<double> w(100000);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::abs(gen.sample(RngStream(2024, i)).positions[2]);
        CHECK(std::abs(stats::empirical_cv_score(w) - fbm::cv_score()) < 0.01);
    }
}

TEST_CASE("fbm kl divergence") {
    for (double h : {0.1, 0.5, 0.9}) CHECK(fbm::kl(HurstExponent(h), 1.0) == 0.0);
    const HurstExponent h(0.75);
    const double expected = 0.5 * (std::pow(2.0, 1.5) - 1.0) - 0.75 * std::log(2.0);
    CHECK(std::abs(fbm::kl(h, 2.0) - expected) < 1e-15);
    CHECK(std::abs(fbm::kl(h, 2.0) - 0.3943532) < 1e-7);
    CHECK(std::abs(fbm::kl(h, 1e12) / (0.5 * std::pow(1e12, 1.5)) - 1.0) < 1e-6);
    CHECK_THROWS_AS(fbm::kl(h, 0.0), DomainError);
}

TEST_CASE("fbm and fim kl are U-shaped in t") {
    for (double hv : {0.25, 0.5, 0.75}) {
        const HurstExponent h(hv);
        std::vector<double> below_fbm, below_fim, above_fbm, above_fim;
        for (int k = -40; k < 0; ++k) {
            const double t = std::pow(10.0, k / 10.0);
            below_fbm.push_back(fbm::kl(h, t));
            below_fim.push_back(fim::kl(h, t));
        }
        for (int k = 1; k <= 40; ++k) {
            const double t = std::pow(10.0, k / 10.0);
            above_fbm.push_back(fbm::kl(h, t));
            above_fim.push_back(fim::kl(h, t));
        }
        CHECK(stats::trend(below_fbm) == stats::Trend::Decreasing);
        CHECK(stats::trend(below_fim) == stats::Trend::Decreasing);
        CHECK(stats::trend(above_fbm) == stats::Trend::Increasing);
        CHECK(stats::trend(above_fim) == stats::Trend::Increasing);
        CHECK(below_fbm.back() > 0.0);
        CHECK(above_fim.front() > 0.0);
    }
}

TEST_CASE("fbm increment variance is stationary") {
    CHECK(fbm::increment_variance(fbm::Params(HurstExponent(0.5)), 3.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
    const fbm::Params p(HurstExponent(0.25));
    CHECK(fbm::increment_variance(p, 0.0, 4.0) == fbm::increment_variance(p, 100.0, 4.0));
    CHECK(std::abs(fbm::increment_variance(p, 0.0, 4.0) - 2.0) < 1e-15);
    CHECK_THROWS_AS(fbm::increment_variance(p, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(fbm::increment_variance(p, -1.0, 1.0), DomainError);
}

TEST_CASE("fbm velocity covariance") {
    const fbm::Params bm(HurstExponent(0.5));
    CHECK(fbm::velocity_covariance(bm, 1.0, 2.0) == 0.0);
    CHECK(fbm::velocity_covariance(bm, 0.3, 7.0) == 0.0);
    CHECK(std::abs(fbm::velocity_covariance(fbm::Params(HurstExponent(0.25)), 1.0, 2.0) + 0.125) < 1e-15);
    CHECK(fbm::velocity_covariance(fbm::Params(HurstExponent(0.75)), 1.0, 2.5) > 0.0);
    CHECK(fbm::velocity_covariance(fbm::Params(HurstExponent(0.25)), 1.0, 2.5) < 0.0);
    CHECK_THROWS_AS(fbm::velocity_covariance(bm, 1.0, 1.0), DomainError);
}

TEST_CASE("fbm tail probability") {
    const fbm::Params bm(HurstExponent(0.5));
    CHECK(std::abs(fbm::tail_probability(bm, 1.0, 1.96) - 0.05) < 1e-4);
    CHECK(std::abs(fbm::tail_probability(bm, 1.0, 1e-12) - 1.0) < 1e-11);
    const fbm::Params p(HurstExponent(0.3), 1.5);
    double prev = 1.0;
    for (double l = 0.01; l < 40.0; l *= 1.2) {
        const double q = fbm::tail_probability(p, 2.0, l);
        CHECK(q < prev);
        const double ref = boost::math::erfc(l / std::sqrt(2.0 * 1.5 * std::pow(2.0, 0.6)));
        CHECK(std::abs(q - ref) <= 1e-13 * ref);
        CHECK(std::abs(fbm::log_tail_probability(p, 2.0, l) - std::log(ref)) <= 1e-10 * std::max(1.0, -std::log(ref)));
        prev = q;
    }
    // Far tail where the probability underflows: log erfc(z) ~ -z^2 - ln(z sqrt(pi)).
    const double z = 100.0 / std::sqrt(2.0);
    const double approx = -z * z - std::log(z * std::sqrt(std::numbers::pi)) - 1.0 / (2.0 * z * z);
    CHECK(std::abs(fbm::log_tail_probability(bm, 1.0, 100.0) - approx) < 1e-6);
}

TEST_CASE("cholesky generator reproduces BM variance and fbm covariance") {
    const auto grid = TimeGrid::uniform(2.0, 16);
    {
        const fbm::CholeskyGenerator gen(fbm::Params(HurstExponent(0.5)), grid);
        std::vector<Trajectory> paths;
        for (std::uint64_t i = 0; i < 10000; ++i) paths.push_back(gen.sample(RngStream(101, i)));
        for (std::size_t k : {2u, 8u, 16u}) {
            const auto x = column(paths, k);
            CAPTURE(k);
            CHECK(std::abs(moments(x).variance - grid[k]) < 4.0 * testing::variance_standard_error(x));
        }
    }
    {
        const fbm::Params p(HurstExponent(0.75));
        const fbm::CholeskyGenerator gen(p, grid);
        std::vector<Trajectory> paths;
        for (std::uint64_t i = 0; i < 10000; ++i) paths.push_back(gen.sample(RngStream(102, i)));
        double se = 0.0;
        const double c = sample_cov(column(paths, 8), column(paths, 16), &se);
        CHECK(std::abs(c - fbm::covariance(p, 1.0, 2.0)) < 4.0 * se);
    }
}

TEST_CASE("cholesky generator contract") {
    const fbm::Params p(HurstExponent(0.3));
    const TimeGrid irregular({0.0, 0.01, 0.5, 0.51, 3.0});
    const auto a = fbm::simulate_cholesky(p, irregular, RngStream(4, 4));
    const auto b = fbm::simulate_cholesky(p, irregular, RngStream(4, 4));
    CHECK(a.positions == b.positions);
    CHECK(a.positions.size() == irregular.size());
    CHECK(a.positions[0] == 0.0);
    CHECK(a.positions != fbm::simulate_cholesky(p, irregular, RngStream(4, 5)).positions);
    CHECK_THROWS_AS(fbm::CholeskyGenerator(p, TimeGrid::uniform(1.0, 64), 32), DomainError);
}

TEST_CASE("circulant generator contract") {
    const fbm::Params p(HurstExponent(0.8));
    const auto grid = TimeGrid::uniform(1.0, 100);
    const auto a = fbm::simulate_circulant(p, grid, RngStream(6, 1));
    CHECK(a.positions == fbm::simulate_circulant(p, grid, RngStream(6, 1)).positions);
    CHECK(a.positions[0] == 0.0);
    CHECK(a.positions.size() == 101);
    CHECK_THROWS(fbm::CirculantGenerator(p, TimeGrid({0.0, 0.1, 0.3})));
    for (double h : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        const fbm::CirculantGenerator gen(fbm::Params(HurstExponent(h)), TimeGrid::uniform(1.0, 257));
        for (double w : gen.spectral_weights()) CHECK(w >= 0.0);
    }
}

TEST_CASE("circulant BM increments are independent standard normals") {
    const auto grid = TimeGrid::uniform(1.0, 512);
    fbm::CirculantGenerator gen(fbm::Params(HurstExponent(0.5)), grid);
    std::vector<double> inc, lagged_a, lagged_b;
    const double scale = std::sqrt(512.0);
    for (std::uint64_t i = 0; i < 40; ++i) {
        const auto path = gen.sample(RngStream(8, i));
        for (std::size_t k = 1; k < path.positions.size(); ++k) {
            inc.push_back((path.positions[k] - path.positions[k - 1]) * scale);
        }
        for (std::size_t k = 2; k < path.positions.size(); ++k) {
            lagged_a.push_back((path.positions[k - 1] - path.positions[k - 2]) * scale);
            lagged_b.push_back((path.positions[k] - path.positions[k - 1]) * scale);
        }
    }
    CHECK(stats::jarque_bera(inc).p_value > 0.01);
    CHECK(stats::ks_statistic(inc, normal_cdf).p_value > 0.01);
    double se = 0.0;
    const double lag_cov = sample_cov(lagged_a, lagged_b, &se);
    CHECK(std::abs(lag_cov) < 4.0 * se);
}

TEST_CASE("fbm ensemble properties") {
    for (double hv : {0.25, 0.75}) {
        CAPTURE(hv);
        const HurstExponent h(hv);
        const fbm::Params p(h);
        const auto grid = TimeGrid::uniform(4.0, 64);
        const auto chol = stats::generate_ensemble(stats::Model::Fbm, h, grid, 10000, 77,
                                                   {stats::FbmMethod::Cholesky, 1.0, {}, true});
        const auto circ = stats::generate_ensemble(stats::Model::Fbm, h, grid, 10000, 78);

        // Gaussianity at an interior grid point.
        CHECK(stats::jarque_bera(stats::values_at(circ, 1.5)).p_value > 0.01);

        // Selfsimilarity in law: B(4) vs 4^H B(1).
        auto scaled = stats::values_at(circ, 1.0);
        for (auto& v : scaled) v *= std::pow(4.0, hv);
        CHECK(stats::ks_two_sample(stats::values_at(chol, 4.0), scaled).p_value > 0.01);

        // Stationary increments: variance is flat in t.
        const auto early = stats::increment_variance(circ, {0.0, 0.5});
        const auto late = stats::increment_variance(circ, {3.5, 4.0});
        CHECK(std::abs(early.value - late.value) < 3.0 * std::hypot(early.standard_error, late.standard_error));
        CHECK(std::abs(early.value - fbm::increment_variance(p, 0.0, 0.5)) < 4.0 * early.standard_error);

        // Sign pattern of disjoint increment covariance.
        const auto cov = stats::increment_covariance(circ, {1.0, 2.0}, {2.0, 3.0});
        if (hv < 0.5) {
            CHECK(cov.value < -2.0 * cov.standard_error);
        } else {
            CHECK(cov.value > 2.0 * cov.standard_error);
        }

        // Cross-generator agreement on the terminal value and an interior increment.
        CHECK(stats::ks_two_sample(stats::values_at(chol, 4.0), stats::values_at(circ, 4.0)).p_value > 0.01);
        std::vector<double> inc_a, inc_b;
        for (const auto& path : chol.paths) inc_a.push_back(path.positions[40] - path.positions[20]);
        for (const auto& path : circ.paths) inc_b.push_back(path.positions[40] - path.positions[20]);
        CHECK(stats::ks_two_sample(inc_a, inc_b).p_value > 0.01);
    }
}
