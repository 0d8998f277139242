#pragma once

#include "selfsim/fim.hpp"
#include "selfsim/grid.hpp"
#include "selfsim/rng.hpp"

namespace selfsim::dlp {

/// Diffusion in the logarithmic potential U(x) = r ln|x| with r = H - 1/2.
struct Params {
    HurstExponent h;

    double r() const noexcept { return h - 0.5; }
};

/// phi(x) = 2H |x|^(1/(2H)) sign(x). Maps a FIM path to a DLP path.
double phi(HurstExponent h, double x);

/// phi^-1(y) = (|y| / 2H)^(2H) sign(y).
double phi_inverse(HurstExponent h, double y);

/// phi'(x) = |x|^(1/(2H) - 1), the reciprocal of the FIM volatility.
double phi_prime(HurstExponent h, double x);

/// phi''(x).
double phi_second(HurstExponent h, double x);

/// U(x) = (H - 1/2) ln|x|. Throws DomainError at x = 0.
double potential(HurstExponent h, double x);

/// Langevin drift -U'(x) = (1/2 - H) / x.
double drift(HurstExponent h, double x);

/// Default drift floor in xi-coordinates: sqrt(dt).
double default_floor(double dt);

/// Euler-Maruyama path of d xi = (1/2 - H)/xi dt + dB in xi-coordinates.
/// 1/xi is evaluated at sign(xi) max(|xi|, floor). With bootstrap on, the
/// first grid value is phi of an exact FIM marginal draw.
Trajectory simulate_langevin(const Params& p, const EmScheme& scheme, const TimeGrid& grid,
                             RngStream stream);

/// Applies phi^-1 pointwise, turning a DLP path into a FIM path.
Trajectory to_fim(HurstExponent h, Trajectory xi_path);

} // namespace selfsim::dlp
