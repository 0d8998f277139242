#include <doctest.h>

#include <cmath>

#include "selfsim/dlp.hpp"
#include "selfsim/error.hpp"
#include "selfsim/fim.hpp"
#include "selfsim/special.hpp"
#include "selfsim/stats.hpp"

using namespace selfsim;

TEST_CASE("dlp parameter") {
    CHECK(dlp::Params{HurstExponent(0.25)}.r() == -0.25);
    CHECK(dlp::Params{HurstExponent(0.75)}.r() == 0.25);
    CHECK(dlp::Params{HurstExponent(0.5)}.r() == 0.0);
}

TEST_CASE("phi and its inverse") {
    const HurstExponent half(0.5);
    for (double x : {-7.5, -1.0, 0.0, 0.3, 12.0}) {
        CHECK(dlp::phi(half, x) == doctest::Approx(x).epsilon(1e-15));
        CHECK(dlp::phi_inverse(half, x) == doctest::Approx(x).epsilon(1e-15));
    }
    for (double hv : {0.25, 0.75}) {
        const HurstExponent h(hv);
        CHECK(dlp::phi(h, 0.0) == 0.0);
        CHECK(std::abs(dlp::phi_inverse(h, 2.0 * hv) - 1.0) < 1e-15);
        double prev = -std::numeric_limits<double>::infinity();
        for (int k = -60; k <= 60; ++k) {
            const double x = std::pow(10.0, k / 10.0);
            CHECK(dlp::phi(h, -x) == -dlp::phi(h, x));
            for (double s : {-1.0, 1.0}) {
                const double y = s * x;
                CHECK(std::abs(dlp::phi_inverse(h, dlp::phi(h, y)) - y) <= 1e-12 * std::max(1.0, std::abs(y)));
            }
            CHECK(dlp::phi(h, x) > prev);
            prev = dlp::phi(h, x);
        }
    }
}

TEST_CASE("phi derivative equals the inverse volatility") {
    for (double hv : {0.25, 0.75}) {
        const HurstExponent h(hv);
        for (double x : {0.1, 1.0, 10.0}) {
            const double d = 1e-6 * x;
            const double fd = (dlp::phi(h, x + d) - dlp::phi(h, x - d)) / (2.0 * d);
            CHECK(std::abs(fd * fim::volatility(h, x) - 1.0) < 1e-6);
            CHECK(std::abs(dlp::phi_prime(h, x) * fim::volatility(h, x) - 1.0) < 1e-13);
            const double fd2 = (dlp::phi_prime(h, x + d) - dlp::phi_prime(h, x - d)) / (2.0 * d);
            CHECK(std::abs(fd2 - dlp::phi_second(h, x)) < 1e-6 * std::max(1.0, std::abs(fd2)));
        }
    }
}

TEST_CASE("chain rule maps the fim generator onto the logarithmic drift") {
    for (double hv : {0.2, 0.25, 0.6, 0.75}) {
        const HurstExponent h(hv);
        for (int k = 0; k <= 400; ++k) {
            const double x = 1e-2 * std::pow(1e4, k / 400.0);
            for (double s : {-1.0, 1.0}) {
                const double y = s * x;
                const double sigma = fim::volatility(h, y);
                const double residual = 0.5 * dlp::phi_second(h, y) * sigma * sigma - (0.5 - hv) / dlp::phi(h, y);
                CHECK(std::abs(residual) < 1e-8);
            }
        }
    }
}

TEST_CASE("logarithmic potential and drift") {
    CHECK(dlp::potential(HurstExponent(0.5), 3.0) == 0.0);
    CHECK(dlp::drift(HurstExponent(0.5), -3.0) == 0.0);
    const HurstExponent h(0.25);
    const double d = 1e-6;
    const double force = -(dlp::potential(h, 2.0 + d) - dlp::potential(h, 2.0 - d)) / (2.0 * d);
    CHECK(std::abs(force - 0.125) < 1e-8);
    CHECK(std::abs(dlp::drift(h, 2.0) - 0.125) < 1e-15);
    for (double x : {0.3, 1.0, 4.0}) CHECK(dlp::potential(h, x) == dlp::potential(h, -x));
    CHECK_THROWS_AS(dlp::potential(h, 0.0), DomainError);
    CHECK_THROWS_AS(dlp::drift(h, 0.0), DomainError);

    // Repulsive for sub-diffusion, attractive for super-diffusion.
    for (double hv : {0.1, 0.25, 0.75, 0.9}) {
        for (double x : {-5.0, -0.2, 0.2, 5.0}) {
            const double lhs = std::copysign(1.0, dlp::drift(HurstExponent(hv), x)) * std::copysign(1.0, x);
            CHECK(lhs == std::copysign(1.0, 0.5 - hv));
        }
    }
}

TEST_CASE("Langevin integrator contract") {
    const dlp::Params p{HurstExponent(0.3)};
    const auto grid = TimeGrid::uniform(1.0, 64);
    const EmScheme scheme(1.0 / 64);
    const auto a = dlp::simulate_langevin(p, scheme, grid, RngStream(3, 2));
    CHECK(a.positions == dlp::simulate_langevin(p, scheme, grid, RngStream(3, 2)).positions);
    CHECK(a.positions[0] == 0.0);
    CHECK_THROWS_AS(dlp::simulate_langevin(p, EmScheme(0.25), grid, RngStream(3, 2)), DomainError);

    const auto mapped = dlp::to_fim(HurstExponent(0.3), a);
    for (std::size_t k = 0; k < a.positions.size(); ++k) {
        CHECK(mapped.positions[k] == dlp::phi_inverse(HurstExponent(0.3), a.positions[k]));
    }
}

TEST_CASE("Langevin at H=1/2 is Brownian motion") {
    const auto e = stats::generate_ensemble(stats::Model::DlpMapped, HurstExponent(0.5), TimeGrid::uniform(2.0, 128),
                                            5000, 21);
    std::vector<double> z;
    for (double v : stats::values_at(e, 2.0)) z.push_back(v / std::sqrt(2.0));
    CHECK(stats::ks_statistic(z, normal_cdf).p_value > 0.01);
}

TEST_CASE("mapped Langevin terminal law matches the exact sampler at H=0.25") {
    const HurstExponent h(0.25);
    const auto e = stats::generate_ensemble(stats::Model::DlpMapped, h, TimeGrid::uniform(1.0, 1024), 10000, 22);
    RngStream s(23, 0);
    std::vector<double> exact(10000);
    for (auto& v : exact) v = fim::sample_marginal(h, 1.0, s);
    CHECK(stats::ks_two_sample(stats::values_at(e, 1.0), exact).p_value > 0.01);
}
