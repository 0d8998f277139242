#include "selfsim/fim.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "selfsim/error.hpp"
#include "selfsim/special.hpp"

namespace selfsim {

EmScheme::EmScheme(double step, std::optional<double> floor_value, bool exact_start)
    : dt(step), floor(floor_value), bootstrap(exact_start) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw DomainError("EM step must be positive and finite");
    }
    if (floor_value && !(*floor_value >= 0.0)) {
        throw DomainError("EM floor must be non-negative");
    }
}

} // namespace selfsim

namespace selfsim::fim {

namespace {

void require_positive_time(double t, const char* what) {
    if (!(t > 0.0)) {
        throw DomainError(std::string(what) + ": t must be positive");
    }
}

// lambda / t with lambda = 2H^2: the rate in exp(-(2H^2/t)|x|^(1/H)).
double rate(HurstExponent h, double t) { return 2.0 * h * h / t; }

} // namespace

double volatility(HurstExponent h, double x) {
    if (h == 0.5) return 1.0;
    return std::pow(std::abs(x), 1.0 - 0.5 / h);
}

double sample_marginal(HurstExponent h, double t, RngStream& stream) {
    require_positive_time(t, "fim marginal");
    const double z = gamma_sample(1.0 - h, stream);
    const double magnitude = std::pow(t * z / (2.0 * h * h), h.value());
    return stream.sign() * magnitude;
}

double variance_at_one(HurstExponent h) {
    const double hv = h;
    return std::exp(-2.0 * hv * std::log(2.0 * hv * hv) + log_gamma(1.0 + hv) - log_gamma(1.0 - hv));
}

double log_density(HurstExponent h, double t, double x) {
    require_positive_time(t, "fim density");
    const double hv = h;
    const double c = rate(h, t);
    const double ax = std::abs(x);
    const double shape_exponent = 1.0 / hv - 2.0;
    const double log_norm = -std::log(2.0 * hv) - log_gamma(1.0 - hv) + (1.0 - hv) * std::log(c);
    if (ax == 0.0) {
        if (shape_exponent > 0.0) return -std::numeric_limits<double>::infinity();
        if (shape_exponent < 0.0) return std::numeric_limits<double>::infinity();
        return log_norm;
    }
    return log_norm - c * std::pow(ax, 1.0 / hv) + shape_exponent * std::log(ax);
}

double density(HurstExponent h, double t, double x) { return std::exp(log_density(h, t, x)); }

double cdf(HurstExponent h, double t, double x) {
    require_positive_time(t, "fim cdf");
    const double hv = h;
    const double ax = std::abs(x);
    const double half_mass = 0.5 * regularized_lower_incomplete_gamma(1.0 - hv, rate(h, t) * std::pow(ax, 1.0 / hv));
    return x >= 0.0 ? 0.5 + half_mass : 0.5 - half_mass;
}

Modes mode_locations(HurstExponent h, double t) {
    require_positive_time(t, "fim modes");
    switch (h.classification()) {
    case Diffusivity::Sub: {
        const double hv = h;
        const double peak = std::pow(t * (1.0 - 2.0 * hv) / (2.0 * hv * hv), hv);
        return {{-peak, peak}, false};
    }
    case Diffusivity::Regular: return {{0.0}, false};
    case Diffusivity::Super: return {{0.0}, true};
    }
    return {};
}

double default_floor(HurstExponent h, double dt) { return std::pow(dt, h.value()); }

Trajectory simulate_em(const Params& p, const EmScheme& scheme, const TimeGrid& grid, RngStream stream) {
    if (!grid.is_uniform()) {
        throw DomainError("FIM Euler-Maruyama requires a uniform grid");
    }
    const double dt = *grid.step();
    if (std::abs(scheme.dt - dt) > 1e-9 * dt) {
        throw DomainError("EM step does not match the grid step");
    }
    const HurstExponent h = p.h;
    const double floor = scheme.floor.value_or(default_floor(h, dt));
    const double sqrt_dt = std::sqrt(dt);
    const bool regular = h.classification() == Diffusivity::Regular;
    const bool super = h.classification() == Diffusivity::Super;
    const double exponent = 1.0 - 0.5 / h;

    std::vector<double> x(grid.size(), 0.0);
    std::size_t start = 0;
    if (scheme.bootstrap && grid.size() > 1) {
        x[1] = sample_marginal(h, grid[1], stream);
        start = 1;
    }
    for (std::size_t k = start; k + 1 < grid.size(); ++k) {
        double current = x[k];
        // Restart from the floor rather than sit at the trivial solution.
        if (super && current == 0.0 && k > 0) {
            current = stream.sign() * floor;
        }
        double sigma = 1.0;
        if (!regular) {
            const double at = super ? std::abs(current) : std::max(std::abs(current), floor);
            sigma = std::pow(at, exponent);
        }
        const double next = current + sigma * sqrt_dt * stream.normal();
        if (!std::isfinite(next)) {
            throw NumericalError("FIM Euler-Maruyama overflow at step " + std::to_string(k + 1));
        }
        x[k + 1] = next;
    }
    return {grid, std::move(x)};
}

double cv_score(HurstExponent h) {
    const double a = std::numbers::pi * h;
    return 1.0 - std::sin(a) / a;
}

double kl(HurstExponent h, double t) {
    require_positive_time(t, "fim kl");
    return (1.0 - h) * ((t - 1.0) - std::log(t));
}

double increment_variance(HurstExponent h, double t, double delta) {
    if (!(t >= 0.0)) throw DomainError("fim increment variance: t must be non-negative");
    if (!(delta > 0.0)) throw DomainError("fim increment variance: delta must be positive");
    const double two_h = 2.0 * h;
    return variance_at_one(h) * (std::pow(t + delta, two_h) - std::pow(t, two_h));
}

double position_covariance(HurstExponent h, double t1, double t2) {
    if (!(t1 >= 0.0) || !(t2 >= 0.0)) {
        throw DomainError("fim position covariance: times must be non-negative");
    }
    return variance_at_one(h) * std::pow(std::min(t1, t2), 2.0 * h);
}

double tail_probability(HurstExponent h, double t, double l) {
    require_positive_time(t, "fim tail");
    if (!(l >= 0.0)) throw DomainError("fim tail: level must be non-negative");
    return regularized_upper_incomplete_gamma(1.0 - h, rate(h, t) * std::pow(l, 1.0 / h));
}

double log_tail_probability(HurstExponent h, double t, double l) {
    require_positive_time(t, "fim tail");
    if (!(l >= 0.0)) throw DomainError("fim tail: level must be non-negative");
    return log_regularized_upper_incomplete_gamma(1.0 - h, rate(h, t) * std::pow(l, 1.0 / h));
}

} // namespace selfsim::fim
