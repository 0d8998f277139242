#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selfsim/grid.hpp"
#include "selfsim/quadrature.hpp"

namespace selfsim::stats {

enum class Model { Fbm, Fim, DlpMapped };

std::string_view to_string(Model m) noexcept;
/// Accepts "fbm", "fim", "dlp". Throws DomainError otherwise.
Model parse_model(std::string_view name);

/// A set of paths on a shared grid, with provenance.
struct Ensemble {
    Model model;
    HurstExponent h;
    TimeGrid grid;
    std::vector<Trajectory> paths;
    std::uint64_t seed;

    /// Throws DomainError unless there is at least one path and every path
    /// lives on `grid` with matching length.
    void validate() const;
};

enum class FbmMethod { Cholesky, Circulant };

struct EnsembleOptions {
    FbmMethod fbm_method = FbmMethod::Circulant;
    double fbm_var_b1 = 1.0;
    std::optional<double> floor;
    bool bootstrap = true;
};

/// Path i is driven by RngStream(seed, i). DlpMapped paths are Langevin
/// paths mapped back through phi^-1.
Ensemble generate_ensemble(Model model, HurstExponent h, const TimeGrid& grid, std::size_t paths,
                           std::uint64_t seed, const EnsembleOptions& opts = {});

struct MsdPoint {
    double t;
    double msd;
};

/// Path average of |X(t) - X(0)|^2 at every grid point.
std::vector<MsdPoint> empirical_msd(const Ensemble& e);

struct PowerLawFit {
    double c;
    double epsilon;
    double r_squared;
};

struct FitOptions {
    /// Leading fraction of the t > 0 points left out of the fit.
    double skip_fraction = 0.1;
};

/// Least squares of ln msd on ln t over points with t > 0, after dropping
/// the leading skip_fraction of them. Needs at least 3 points.
PowerLawFit fit_power_law(std::span<const MsdPoint> curve, const FitOptions& opts = {});

/// 1 - mean^2 / (mean of squares).
double empirical_cv_score(std::span<const double> samples);

struct TestResult {
    double statistic;
    double p_value;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// One-sample Kolmogorov-Smirnov test against `cdf` (asymptotic p-value
/// with Stephens' finite-n correction). Throws DomainError if the CDF is
/// non-monotone or leaves [0, 1] on the sample points.
TestResult ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov test.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Jarque-Bera normality test (chi-square with 2 degrees of freedom).
TestResult jarque_bera(std::span<const double> samples);

/// A density given through its logarithm.
struct Density {
    std::function<double(double)> log_pdf;

    static Density from_pdf(std::function<double(double)> pdf);
    static Density from_log_pdf(std::function<double(double)> log_pdf);
};

struct KlOptions {
    double abs_tol = 1e-10;
    std::size_t max_intervals = 4000;
};

/// Numerical KL divergence D[num || den] over the real line.
///
/// With a Hurst hint both densities are taken to be symmetric FIM-type
/// densities with an |x|^(1/H - 2) factor at the origin; the integral is
/// then taken over v in (0, inf) with x = v^(H/(1-H)), which removes the
/// singularity. Where den underflows to zero, points with
/// num * 1e4 < 1e-3 * abs_tol are dropped (|ln den| is assumed to stay below
/// 1e4 there) and any other point makes the integral diverge. Throws
/// ConvergenceError carrying the achieved estimate.
double kl_quadrature(const Density& num, const Density& den,
                     std::optional<HurstExponent> singularity = std::nullopt,
                     const KlOptions& opts = {});

struct TimeInterval {
    double start;
    double end;
};

struct Estimate {
    double value;
    double standard_error;
};

/// Sample variance of X(end) - X(start) across paths.
Estimate increment_variance(const Ensemble& e, TimeInterval i);

/// Sample covariance across paths of the increments over two disjoint
/// grid-aligned intervals. Throws DomainError if they overlap.
Estimate increment_covariance(const Ensemble& e, TimeInterval i1, TimeInterval i2);

/// Sample covariance of X(t1) and X(t2) across paths.
Estimate position_covariance(const Ensemble& e, double t1, double t2);

/// Terminal (or any grid-point) values of every path.
std::vector<double> values_at(const Ensemble& e, double t);

/// One row of the tail comparison; ratios are stored as natural logs so
/// that far-tail underflow keeps its ordering information.
struct TailRatioRow {
    double level;
    double log_fbm_vs_bm;
    double log_fim_vs_bm;
    double log_fim_vs_fbm;
};

/// Tail ratios P(|A(t)| > l) / P(|B(t)| > l) for FBM/BM, FIM/BM, FIM/FBM
/// (BM is FBM at H = 1/2; FBM uses b = 1). Levels must increase.
std::vector<TailRatioRow> tail_ratio_table(HurstExponent h, double t, std::span<const double> levels);

struct DivergenceRatioRow {
    double t;
    double fbm_vs_bm;
    double fim_vs_bm;
    double fim_vs_fbm;
};

/// KL ratios D[A(t)||A(1)] / D[B(t)||B(1)] from the closed forms. Times must
/// increase and exceed 1.
std::vector<DivergenceRatioRow> divergence_ratio_table(HurstExponent h, std::span<const double> times);

/// Limit of the FIM/BM divergence ratio, 2(1 - H).
double fim_bm_divergence_limit(HurstExponent h);

enum class Trend { Increasing, Decreasing, Constant, Mixed };
std::string_view to_string(Trend t) noexcept;

/// Strict trend of a sequence; steps within 1e-12 relative count as ties (Constant if all tie).
Trend trend(std::span<const double> values);

} // namespace selfsim::stats
