#include "selfsim/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "selfsim/error.hpp"

namespace selfsim::quad {

namespace {

// Kronrod nodes on [0, 1] (symmetric); odd indices are the Gauss nodes.
constexpr std::array<double, 8> kNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) {
            gauss += kGaussWeights[i / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
    if (a == b) return {0.0, 0.0};
    std::priority_queue<Segment> work;
    work.push(kronrod15(f, a, b));
    double total = work.top().value;
    double error = work.top().error;
    std::size_t intervals = 1;
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (!std::isfinite(total) || !std::isfinite(error)) {
            throw ConvergenceError("quadrature produced a non-finite value", total, error);
        }
        if (intervals >= opts.max_intervals) {
            throw ConvergenceError("quadrature did not reach tolerance after " +
                                       std::to_string(intervals) + " intervals",
                                   total, error);
        }
        const Segment worst = work.top();
        work.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = kronrod15(f, worst.a, mid);
        const Segment right = kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        work.push(left);
        work.push(right);
        ++intervals;
        if (error < 0.0) {
            // Accumulated cancellation; resum exactly.
            error = 0.0;
            auto copy = work;
            while (!copy.empty()) {
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    // Resum to shed the drift of incremental updates.
    double value = 0.0;
    double err = 0.0;
    while (!work.empty()) {
        value += work.top().value;
        err += work.top().error;
        work.pop();
    }
    return {value, err};
}

Result integrate_to_infinity(const Integrand& f, double a, const Options& opts) {
    auto mapped = [&f, a](double s) {
        if (s >= 1.0) return 0.0;
        const double one_minus = 1.0 - s;
        const double x = a + s / one_minus;
        const double v = f(x);
        return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, opts);
}

Result integrate_real_line(const Integrand& f, double split, const Options& opts) {
    const Result right = integrate_to_infinity(f, split, opts);
    const Result left = integrate_to_infinity([&f, split](double u) { return f(2.0 * split - u); },
                                              split, opts);
    return {left.value + right.value, left.error_estimate + right.error_estimate};
}

} // namespace selfsim::quad
