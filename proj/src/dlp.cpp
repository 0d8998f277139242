#include "selfsim/dlp.hpp"

#include <cmath>
#include <string>

#include "selfsim/error.hpp"

namespace selfsim::dlp {

namespace {

double signum(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace

double phi(HurstExponent h, double x) {
    return 2.0 * h * std::pow(std::abs(x), 0.5 / h) * signum(x);
}

double phi_inverse(HurstExponent h, double y) {
    return std::pow(std::abs(y) / (2.0 * h), 2.0 * h) * signum(y);
}

double phi_prime(HurstExponent h, double x) { return std::pow(std::abs(x), 0.5 / h - 1.0); }

double phi_second(HurstExponent h, double x) {
    const double e = 0.5 / h - 1.0;
    return e * std::pow(std::abs(x), e - 1.0) * signum(x);
}

double potential(HurstExponent h, double x) {
    if (x == 0.0) {
        throw DomainError("logarithmic potential is singular at x = 0");
    }
    return (h - 0.5) * std::log(std::abs(x));
}

double drift(HurstExponent h, double x) {
    if (x == 0.0) {
        throw DomainError("logarithmic drift is singular at x = 0");
    }
    return (0.5 - h) / x;
}

double default_floor(double dt) { return std::sqrt(dt); }

Trajectory simulate_langevin(const Params& p, const EmScheme& scheme, const TimeGrid& grid,
                             RngStream stream) {
    if (!grid.is_uniform()) {
        throw DomainError("DLP Langevin integrator requires a uniform grid");
    }
    const double dt = *grid.step();
    if (std::abs(scheme.dt - dt) > 1e-9 * dt) {
        throw DomainError("EM step does not match the grid step");
    }
    const HurstExponent h = p.h;
    const double floor = scheme.floor.value_or(default_floor(dt));
    const double strength = 0.5 - h;
    const double sqrt_dt = std::sqrt(dt);

    std::vector<double> xi(grid.size(), 0.0);
    std::size_t start = 0;
    if (scheme.bootstrap && grid.size() > 1) {
        xi[1] = phi(h, fim::sample_marginal(h, grid[1], stream));
        start = 1;
    }
    for (std::size_t k = start; k + 1 < grid.size(); ++k) {
        const double current = xi[k];
        double drift_term = 0.0;
        if (strength != 0.0) {
            // At exactly 0 the direction is undefined; pick one at random.
            const double s = current == 0.0 ? stream.sign() : signum(current);
            drift_term = strength / (s * std::max(std::abs(current), floor));
        }
        const double next = current + drift_term * dt + sqrt_dt * stream.normal();
        if (!std::isfinite(next)) {
            throw NumericalError("DLP Langevin overflow at step " + std::to_string(k + 1));
        }
        xi[k + 1] = next;
    }
    return {grid, std::move(xi)};
}

Trajectory to_fim(HurstExponent h, Trajectory xi_path) {
    for (auto& v : xi_path.positions) v = phi_inverse(h, v);
    return xi_path;
}

} // namespace selfsim::dlp
