#include "selfsim/fbm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "selfsim/error.hpp"
#include "selfsim/special.hpp"

namespace selfsim::fbm {

Params::Params(HurstExponent hurst, double var) : h(hurst), var_b1(var) {
    if (!(var > 0.0) || !std::isfinite(var)) {
        throw DomainError("Var[B_H(1)] must be positive and finite");
    }
}

double covariance(const Params& p, double t1, double t2) {
    if (!(t1 >= 0.0) || !(t2 >= 0.0)) {
        throw DomainError("fbm covariance: times must be non-negative");
    }
    const double two_h = 2.0 * p.h;
    return 0.5 * p.var_b1 *
           (std::pow(t1, two_h) - std::pow(std::abs(t1 - t2), two_h) + std::pow(t2, two_h));
}

double kernel(HurstExponent h, double t, double u) {
    if (!(t > 0.0)) {
        throw DomainError("fbm kernel: t must be positive");
    }
    if (!(u < t)) {
        throw DomainError("fbm kernel: u must be smaller than t");
    }
    const double e = h - 0.5;
    if (u >= 0.0) {
        return std::pow(t - u, e);
    }
    return std::pow(t - u, e) - std::pow(-u, e);
}

// ---------------------------------------------------------------------------
// Cholesky

namespace {

std::size_t packed(std::size_t i, std::size_t j) { return i * (i + 1) / 2 + j; }

// In-place lower Cholesky of a packed symmetric matrix. Returns the index of
// the first non-positive pivot, or dim on success.
std::size_t cholesky_in_place(std::vector<double>& a, std::size_t dim) {
    for (std::size_t j = 0; j < dim; ++j) {
        double diag = a[packed(j, j)];
        for (std::size_t k = 0; k < j; ++k) {
            diag -= a[packed(j, k)] * a[packed(j, k)];
        }
        if (!(diag > 0.0)) {
            return j;
        }
        const double ljj = std::sqrt(diag);
        a[packed(j, j)] = ljj;
        for (std::size_t i = j + 1; i < dim; ++i) {
            double s = a[packed(i, j)];
            for (std::size_t k = 0; k < j; ++k) {
                s -= a[packed(i, k)] * a[packed(j, k)];
            }
            a[packed(i, j)] = s / ljj;
        }
    }
    return dim;
}

} // namespace

CholeskyGenerator::CholeskyGenerator(const Params& p, TimeGrid grid, std::size_t cap)
    : grid_(std::move(grid)), dim_(grid_.size() - 1) {
    if (grid_.size() > cap) {
        throw DomainError("Cholesky generator: grid of " + std::to_string(grid_.size()) +
                          " points exceeds the cap of " + std::to_string(cap));
    }
    std::vector<double> cov(dim_ * (dim_ + 1) / 2);
    double trace = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            cov[packed(i, j)] = covariance(p, grid_[i + 1], grid_[j + 1]);
        }
        trace += cov[packed(i, i)];
    }
    lower_ = cov;
    std::size_t pivot = cholesky_in_place(lower_, dim_);
    if (pivot != dim_) {
        const double jitter = 1e-12 * trace / static_cast<double>(dim_);
        lower_ = std::move(cov);
        for (std::size_t i = 0; i < dim_; ++i) {
            lower_[packed(i, i)] += jitter;
        }
        pivot = cholesky_in_place(lower_, dim_);
        if (pivot != dim_) {
            throw NumericalError("FBM covariance is not positive definite after jitter (pivot " +
                                 std::to_string(pivot) + ", t = " + std::to_string(grid_[pivot + 1]) +
                                 ")");
        }
    }
}

Trajectory CholeskyGenerator::sample(RngStream stream) const {
    std::vector<double> z(dim_);
    for (auto& v : z) v = stream.normal();
    std::vector<double> x(dim_ + 1, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        const double* row = &lower_[packed(i, 0)];
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) {
            s += row[k] * z[k];
        }
        x[i + 1] = s;
    }
    return {grid_, std::move(x)};
}

Trajectory simulate_cholesky(const Params& p, const TimeGrid& grid, RngStream stream, std::size_t cap) {
    return CholeskyGenerator(p, grid, cap).sample(stream);
}

// ---------------------------------------------------------------------------
// Circulant embedding

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

struct CirculantGenerator::Fft {
    explicit Fft(std::size_t n) : size(n) {
        buffer = fftw_alloc_complex(n);
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buffer);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void execute() { fftw_execute(plan); }
    std::complex<double>& operator[](std::size_t i) {
        return reinterpret_cast<std::complex<double>*>(buffer)[i];
    }

    std::size_t size;
    fftw_complex* buffer = nullptr;
    fftw_plan plan = nullptr;
};

CirculantGenerator::CirculantGenerator(const Params& p, TimeGrid grid) : grid_(std::move(grid)) {
    if (!grid_.is_uniform()) {
        throw DomainError("circulant generator requires a uniform grid");
    }
    const std::size_t n = grid_.size() - 1;
    const double dt = *grid_.step();
    const double two_h = 2.0 * p.h;
    const double scale = 0.5 * p.var_b1 * std::pow(dt, two_h);
    auto gamma = [&](std::size_t k) {
        const double kk = static_cast<double>(k);
        return scale * (std::pow(kk + 1.0, two_h) - 2.0 * std::pow(kk, two_h) +
                        std::pow(std::abs(kk - 1.0), two_h));
    };

    const std::size_t m = 2 * n;
    fft_ = std::make_unique<Fft>(m);
    auto& fft = *fft_;
    for (std::size_t j = 0; j <= n; ++j) fft[j] = gamma(j);
    for (std::size_t j = n + 1; j < m; ++j) fft[j] = gamma(m - j);
    fft.execute();

    double max_eigen = 0.0;
    for (std::size_t k = 0; k < m; ++k) max_eigen = std::max(max_eigen, fft[k].real());
    weights_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lambda = fft[k].real();
        if (lambda < 0.0) {
            if (lambda < -kEmbeddingTolerance * max_eigen) {
                throw NumericalError("circulant embedding eigenvalue " + std::to_string(k) +
                                     " is negative (" + std::to_string(lambda) + ")");
            }
            lambda = 0.0;
        }
        weights_[k] = std::sqrt(lambda / static_cast<double>(m));
    }
}

CirculantGenerator::~CirculantGenerator() = default;
CirculantGenerator::CirculantGenerator(CirculantGenerator&&) noexcept = default;
CirculantGenerator& CirculantGenerator::operator=(CirculantGenerator&&) noexcept = default;

Trajectory CirculantGenerator::sample(RngStream stream) {
    auto& fft = *fft_;
    const std::size_t m = weights_.size();
    for (std::size_t k = 0; k < m; ++k) {
        const double re = stream.normal();
        const double im = stream.normal();
        fft[k] = {weights_[k] * re, weights_[k] * im};
    }
    fft.execute();
    const std::size_t n = m / 2;
    std::vector<double> x(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        x[k + 1] = x[k] + fft[k].real();
    }
    return {grid_, std::move(x)};
}

Trajectory simulate_circulant(const Params& p, const TimeGrid& grid, RngStream stream) {
    return CirculantGenerator(p, grid).sample(stream);
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

void require_positive_time(double t, const char* what) {
    if (!(t > 0.0)) {
        throw DomainError(std::string(what) + ": t must be positive");
    }
}

} // namespace

double density(const Params& p, double t, double x) {
    require_positive_time(t, "fbm density");
    const double var = p.var_b1 * std::pow(t, 2.0 * p.h);
    return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

double cv_score() noexcept { return 1.0 - 2.0 / std::numbers::pi; }

double kl(HurstExponent h, double t) {
    require_positive_time(t, "fbm kl");
    return 0.5 * std::expm1(2.0 * h * std::log(t)) - h * std::log(t);
}

double increment_variance(const Params& p, double t, double delta) {
    if (!(t >= 0.0)) throw DomainError("fbm increment variance: t must be non-negative");
    if (!(delta > 0.0)) throw DomainError("fbm increment variance: delta must be positive");
    return p.var_b1 * std::pow(delta, 2.0 * p.h);
}

double velocity_covariance(const Params& p, double t1, double t2) {
    if (!(t1 > 0.0) || !(t2 > 0.0)) {
        throw DomainError("fbm velocity covariance: times must be positive");
    }
    if (t1 == t2) {
        throw DomainError("fbm velocity covariance is singular at t1 == t2");
    }
    const double h = p.h;
    return p.var_b1 * h * (2.0 * h - 1.0) / std::pow(std::abs(t1 - t2), 2.0 * (1.0 - h));
}

double tail_probability(const Params& p, double t, double l) {
    require_positive_time(t, "fbm tail");
    if (!(l >= 0.0)) throw DomainError("fbm tail: level must be non-negative");
    const double sd = std::sqrt(p.var_b1 * std::pow(t, 2.0 * p.h));
    return std::erfc(l / (sd * std::numbers::sqrt2));
}

double log_tail_probability(const Params& p, double t, double l) {
    require_positive_time(t, "fbm tail");
    if (!(l >= 0.0)) throw DomainError("fbm tail: level must be non-negative");
    // P(|N(0, s^2)| > l) = Q(1/2, l^2 / (2 s^2))
    const double var = p.var_b1 * std::pow(t, 2.0 * p.h);
    return log_regularized_upper_incomplete_gamma(0.5, 0.5 * l * l / var);
}

} // namespace selfsim::fbm
