#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "selfsim/grid.hpp"
#include "selfsim/rng.hpp"

namespace selfsim::fbm {

/// FBM parameters. var_b1 is Var[B_H(1)], the inherent scale.
struct Params {
    HurstExponent h;
    double var_b1 = 1.0;

    explicit Params(HurstExponent hurst, double var = 1.0);
};

/// Cov[B_H(t1), B_H(t2)] = (b/2)(t1^2H - |t1 - t2|^2H + t2^2H).
double covariance(const Params& p, double t1, double t2);

/// Moving-average kernel: (t-u)^(H-1/2) - (-u)^(H-1/2) for u < 0,
/// (t-u)^(H-1/2) for 0 <= u < t.
double kernel(HurstExponent h, double t, double u);

/// Largest grid the Cholesky generator accepts by default.
inline constexpr std::size_t kDefaultCholeskyCap = 4096;

/// Exact Gaussian sampler on an arbitrary grid via the Cholesky factor of
/// the position covariance. The factor is computed once at construction
/// (O(n^3)); each path then costs O(n^2).
class CholeskyGenerator {
public:
    CholeskyGenerator(const Params& p, TimeGrid grid, std::size_t cap = kDefaultCholeskyCap);

    Trajectory sample(RngStream stream) const;

    const TimeGrid& grid() const noexcept { return grid_; }

private:
    TimeGrid grid_;
    std::size_t dim_;
    std::vector<double> lower_; // row-major packed lower triangle
};

/// Exact sampler on a uniform grid by circulant embedding of the increment
/// autocovariance (Davies-Harte). Embedding eigenvalues are computed once;
/// each path costs one FFT of length 2n.
///
/// Not thread-safe: the FFT workspace is owned by the generator. Use one
/// generator per thread.
class CirculantGenerator {
public:
    CirculantGenerator(const Params& p, TimeGrid grid);
    ~CirculantGenerator();
    CirculantGenerator(CirculantGenerator&&) noexcept;
    CirculantGenerator& operator=(CirculantGenerator&&) noexcept;

    Trajectory sample(RngStream stream);

    const TimeGrid& grid() const noexcept { return grid_; }
    /// Square roots of the embedding eigenvalues scaled by 1/sqrt(2n).
    const std::vector<double>& spectral_weights() const noexcept { return weights_; }

private:
    struct Fft;
    TimeGrid grid_;
    std::vector<double> weights_;
    std::unique_ptr<Fft> fft_;
};

/// Relative threshold below which a negative embedding eigenvalue aborts.
inline constexpr double kEmbeddingTolerance = 1e-9;

Trajectory simulate_cholesky(const Params& p, const TimeGrid& grid, RngStream stream,
                             std::size_t cap = kDefaultCholeskyCap);
Trajectory simulate_circulant(const Params& p, const TimeGrid& grid, RngStream stream);

/// Normal density with mean 0 and variance b t^2H.
double density(const Params& p, double t, double x);

/// CV score of |B_H(t)|: 1 - 2/pi for every H.
double cv_score() noexcept;

/// KL divergence D[B_H(t) || B_H(1)] = (t^2H - 1)/2 - H ln t.
double kl(HurstExponent h, double t);

/// Var[B_H(t + delta) - B_H(t)] = b delta^2H, independent of t.
double increment_variance(const Params& p, double t, double delta);

/// Velocity covariance b H(2H - 1) / |t1 - t2|^(2 - 2H) for t1 != t2.
double velocity_covariance(const Params& p, double t1, double t2);

/// P(|B_H(t)| > l).
double tail_probability(const Params& p, double t, double l);
/// ln P(|B_H(t)| > l), finite deep in the tail.
double log_tail_probability(const Params& p, double t, double l);

} // namespace selfsim::fbm
