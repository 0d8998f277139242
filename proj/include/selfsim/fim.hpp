#pragma once

#include <optional>
#include <vector>

#include "selfsim/grid.hpp"
#include "selfsim/rng.hpp"

namespace selfsim {

/// Euler-Maruyama settings shared by the FIM and DLP integrators.
struct EmScheme {
    double dt;
    /// Regularization floor for the singular coefficient; empty selects the
    /// integrator's default.
    std::optional<double> floor;
    /// Draw the first grid value from the exact marginal.
    bool bootstrap = true;

    explicit EmScheme(double step, std::optional<double> floor_value = std::nullopt, bool exact_start = true);
};

} // namespace selfsim

namespace selfsim::fim {

struct Params {
    HurstExponent h;
};

/// sigma(x) = |x|^(1 - 1/(2H)).
double volatility(HurstExponent h, double x);

/// Exact draw of I_H(t): Z ~ Gamma(1 - H), |I| = (t Z / 2H^2)^H, fair sign.
double sample_marginal(HurstExponent h, double t, RngStream& stream);

/// Var[I_H(1)] = (2H^2)^(-2H) Gamma(1 + H) / Gamma(1 - H).
double variance_at_one(HurstExponent h);

/// Marginal density of I_H(t). Returns +inf at x = 0 for H > 1/2.
double density(HurstExponent h, double t, double x);

/// ln of the marginal density (-inf at x = 0 for H < 1/2).
double log_density(HurstExponent h, double t, double x);

/// P(I_H(t) <= x).
double cdf(HurstExponent h, double t, double x);

/// Where the marginal density peaks.
struct Modes {
    std::vector<double> points;
    /// True when the density is unbounded at the single returned point (H > 1/2).
    bool divergent = false;
};

/// H < 1/2: +-(t(1 - 2H) / 2H^2)^H. H = 1/2: {0}. H > 1/2: {0} flagged divergent.
Modes mode_locations(HurstExponent h, double t);

/// Default floor for the volatility argument: dt^H, the displacement at
/// which one EM step is as large as the distance to the origin.
double default_floor(HurstExponent h, double dt);

/// Euler-Maruyama path of dX = sigma(X) dB on a uniform grid.
/// For H < 1/2 sigma is evaluated at max(|x|, floor). For H > 1/2 a path
/// that lands exactly on 0 is restarted from +-floor with a random sign. Throws NumericalError naming
/// the step at which the state stops being finite.
Trajectory simulate_em(const Params& p, const EmScheme& scheme, const TimeGrid& grid, RngStream stream);

/// CV score of |I_H(t)|: 1 - sin(pi H) / (pi H).
double cv_score(HurstExponent h);

/// D[I_H(t) || I_H(1)] = (1 - H)(t - 1 - ln t).
double kl(HurstExponent h, double t);

/// Var[I_H(t + delta) - I_H(t)] = Var[I_H(1)] ((t + delta)^2H - t^2H).
double increment_variance(HurstExponent h, double t, double delta);

/// Cov[I_H(t1), I_H(t2)] = Var[I_H(1)] min(t1, t2)^2H.
double position_covariance(HurstExponent h, double t1, double t2);

/// P(|I_H(t)| > l) = Q(1 - H, (2H^2 / t) l^(1/H)).
double tail_probability(HurstExponent h, double t, double l);
double log_tail_probability(HurstExponent h, double t, double l);

} // namespace selfsim::fim
