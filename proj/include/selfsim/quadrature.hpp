#pragma once

#include <cstddef>
#include <functional>

namespace selfsim::quad {

struct Result {
    double value;
    double error_estimate;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    std::size_t max_intervals = 4000;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod on [a, b].
/// Throws ConvergenceError (carrying the achieved estimate) when the
/// interval budget runs out before the tolerance is met.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Integral over [a, inf) via x = a + s / (1 - s).
Result integrate_to_infinity(const Integrand& f, double a, const Options& opts = {});

/// Integral over the whole real line, split at `split`.
Result integrate_real_line(const Integrand& f, double split = 0.0, const Options& opts = {});

} // namespace selfsim::quad
