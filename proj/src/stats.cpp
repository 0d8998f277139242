#include "selfsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "selfsim/dlp.hpp"
#include "selfsim/error.hpp"
#include "selfsim/fbm.hpp"
#include "selfsim/fim.hpp"

namespace selfsim::stats {

std::string_view to_string(Model m) noexcept {
    switch (m) {
    case Model::Fbm: return "fbm";
    case Model::Fim: return "fim";
    case Model::DlpMapped: return "dlp";
    }
    return "unknown";
}

Model parse_model(std::string_view name) {
    if (name == "fbm") return Model::Fbm;
    if (name == "fim") return Model::Fim;
    if (name == "dlp") return Model::DlpMapped;
    throw DomainError("unknown model '" + std::string(name) + "' (expected fbm, fim or dlp)");
}

void Ensemble::validate() const {
    if (paths.empty()) {
        throw DomainError("ensemble has no paths");
    }
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (!paths[i].grid.same_as(grid) || paths[i].positions.size() != grid.size()) {
            throw DomainError("path " + std::to_string(i) + " does not share the ensemble grid");
        }
    }
}

Ensemble generate_ensemble(Model model, HurstExponent h, const TimeGrid& grid, std::size_t paths,
                           std::uint64_t seed, const EnsembleOptions& opts) {
    if (paths == 0) {
        throw DomainError("an ensemble needs at least one path");
    }
    Ensemble e{model, h, grid, {}, seed};
    e.paths.reserve(paths);
    switch (model) {
    case Model::Fbm: {
        const fbm::Params p(h, opts.fbm_var_b1);
        if (opts.fbm_method == FbmMethod::Cholesky) {
            const fbm::CholeskyGenerator gen(p, grid);
            for (std::size_t i = 0; i < paths; ++i) e.paths.push_back(gen.sample(RngStream(seed, i)));
        } else {
            fbm::CirculantGenerator gen(p, grid);
            for (std::size_t i = 0; i < paths; ++i) e.paths.push_back(gen.sample(RngStream(seed, i)));
        }
        break;
    }
    case Model::Fim: {
        if (!grid.is_uniform()) throw DomainError("FIM ensembles need a uniform grid");
        const EmScheme scheme(*grid.step(), opts.floor, opts.bootstrap);
        for (std::size_t i = 0; i < paths; ++i) {
            e.paths.push_back(fim::simulate_em({h}, scheme, grid, RngStream(seed, i)));
        }
        break;
    }
    case Model::DlpMapped: {
        if (!grid.is_uniform()) throw DomainError("DLP ensembles need a uniform grid");
        const EmScheme scheme(*grid.step(), opts.floor, opts.bootstrap);
        for (std::size_t i = 0; i < paths; ++i) {
            e.paths.push_back(dlp::to_fim(h, dlp::simulate_langevin({h}, scheme, grid, RngStream(seed, i))));
        }
        break;
    }
    }
    return e;
}

std::vector<MsdPoint> empirical_msd(const Ensemble& e) {
    e.validate();
    std::vector<MsdPoint> out(e.grid.size());
    const double n = static_cast<double>(e.paths.size());
    for (std::size_t k = 0; k < e.grid.size(); ++k) {
        double acc = 0.0;
        for (const auto& path : e.paths) {
            const double d = path.positions[k] - path.positions[0];
            acc += d * d;
        }
        out[k] = {e.grid[k], acc / n};
    }
    return out;
}

PowerLawFit fit_power_law(std::span<const MsdPoint> curve, const FitOptions& opts) {
    std::vector<MsdPoint> usable;
    for (const auto& pt : curve) {
        if (pt.t > 0.0) usable.push_back(pt);
    }
    const auto skip = static_cast<std::size_t>(opts.skip_fraction * static_cast<double>(usable.size()));
    if (usable.size() < skip + 3) {
        throw DomainError("power-law fit needs at least 3 points with t > 0");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const std::size_t n = usable.size() - skip;
    for (std::size_t i = skip; i < usable.size(); ++i) {
        if (!(usable[i].msd > 0.0)) {
            throw DomainError("power-law fit needs positive MSD values");
        }
        const double x = std::log(usable[i].t);
        const double y = std::log(usable[i].msd);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double nn = static_cast<double>(n);
    const double vxx = sxx - sx * sx / nn;
    const double vxy = sxy - sx * sy / nn;
    const double vyy = syy - sy * sy / nn;
    if (!(vxx > 0.0)) {
        throw DomainError("power-law fit needs distinct times");
    }
    const double slope = vxy / vxx;
    const double intercept = (sy - slope * sx) / nn;
    double r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    r2 = std::clamp(r2, 0.0, 1.0);
    return {std::exp(intercept), slope, r2};
}

double empirical_cv_score(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw DomainError("CV score needs at least 2 samples");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double w : samples) {
        if (w < 0.0) throw DomainError("CV score needs non-negative samples");
        sum += w;
        sum_sq += w * w;
    }
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    if (!(mean > 0.0)) {
        throw DomainError("CV score needs a positive mean");
    }
    return 1.0 - mean * mean / (sum_sq / n);
}

double kolmogorov_survival(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    if (lambda < 1.18) {
        const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
        const double y9 = std::pow(y, 9.0);
        const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda *
                           (y + y9 + std::pow(y, 25.0) + std::pow(y, 49.0));
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    const double x = std::exp(-2.0 * lambda * lambda);
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::pow(x, static_cast<double>(j * j));
        sum += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double stephens(double n_eff, double d) {
    const double root = std::sqrt(n_eff);
    return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

} // namespace

TestResult ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < 10) {
        throw DomainError("KS test needs at least 10 samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    double previous = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        if (!(f >= 0.0 && f <= 1.0) || f < previous) {
            throw DomainError("KS test: cdf is not monotone in [0,1] at x = " + std::to_string(sorted[i]));
        }
        previous = f;
        const double i1 = static_cast<double>(i);
        d = std::max({d, (i1 + 1.0) / n - f, f - i1 / n});
    }
    return {d, stephens(n, d)};
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw DomainError("two-sample KS test needs non-empty samples");
    }
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double na = static_cast<double>(x.size());
    const double nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, stephens(na * nb / (na + nb), d)};
}

TestResult jarque_bera(std::span<const double> samples) {
    if (samples.size() < 8) {
        throw DomainError("Jarque-Bera test needs at least 8 samples");
    }
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : samples) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) {
        throw DomainError("Jarque-Bera test needs non-degenerate samples");
    }
    const double skew = m3 / std::pow(m2, 1.5);
    const double excess = m4 / (m2 * m2) - 3.0;
    const double jb = n / 6.0 * (skew * skew + 0.25 * excess * excess);
    return {jb, std::exp(-0.5 * jb)};
}

Density Density::from_pdf(std::function<double(double)> pdf) {
    return {[pdf = std::move(pdf)](double x) { return std::log(pdf(x)); }};
}

Density Density::from_log_pdf(std::function<double(double)> log_pdf) { return {std::move(log_pdf)}; }

// Bound assumed for |ln den| just past the point where den underflows; used to
// decide whether a numerator value there is negligible against abs_tol.
constexpr double kUnderflowLogBound = 1e4;

double kl_quadrature(const Density& num, const Density& den, std::optional<HurstExponent> singularity,
                     const KlOptions& opts) {
    auto pointwise = [&](double x) {
        const double ln = num.log_pdf(x);
        if (ln == -std::numeric_limits<double>::infinity()) return 0.0;
        const double f = std::exp(ln);
        if (f == 0.0) return 0.0;
        const double ld = den.log_pdf(x);
        // A denominator that underflowed where the numerator is negligible
        // against the requested tolerance contributes nothing; elsewhere it is
        // a genuine divergence and propagates as infinity.
        if (ld == -std::numeric_limits<double>::infinity()) {
            return f * kUnderflowLogBound < 1e-3 * opts.abs_tol ? 0.0 : std::numeric_limits<double>::infinity();
        }
        return f * (ln - ld);
    };
    const quad::Options qopts{opts.abs_tol, 0.0, opts.max_intervals};
    quad::Result r{};
    if (singularity) {
        const double hv = *singularity;
        const double power = hv / (1.0 - hv);
        const double jac_coef = hv / (1.0 - hv);
        const double jac_power = (2.0 * hv - 1.0) / (1.0 - hv);
        auto in_v = [&](double v) {
            if (!(v > 0.0)) return 0.0;
            const double x = std::pow(v, power);
            const double g = pointwise(x);
            return g == 0.0 ? 0.0 : 2.0 * g * jac_coef * std::pow(v, jac_power);
        };
        r = quad::integrate_to_infinity(in_v, 0.0, qopts);
    } else {
        r = quad::integrate_real_line(pointwise, 0.0, qopts);
    }
    return r.value;
}

namespace {


Estimate sample_covariance(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) {
        throw DomainError("covariance needs at least 2 paths");
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double cov = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) cov += (x[i] - mx) * (y[i] - my);
    cov /= n - 1.0;
    double spread = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = (x[i] - mx) * (y[i] - my) - cov;
        spread += d * d;
    }
    return {cov, std::sqrt(spread / (n - 1.0) / n)};
}

std::pair<std::size_t, std::size_t> indices(const Ensemble& e, TimeInterval i) {
    if (!(i.end > i.start)) {
        throw DomainError("interval end must exceed its start");
    }
    return {e.grid.index_of(i.start), e.grid.index_of(i.end)};
}

std::vector<double> increments(const Ensemble& e, std::size_t a, std::size_t b) {
    std::vector<double> out;
    out.reserve(e.paths.size());
    for (const auto& p : e.paths) out.push_back(p.positions[b] - p.positions[a]);
    return out;
}

} // namespace

Estimate increment_variance(const Ensemble& e, TimeInterval i) {
    e.validate();
    const auto [a, b] = indices(e, i);
    const auto inc = increments(e, a, b);
    return sample_covariance(inc, inc);
}

Estimate increment_covariance(const Ensemble& e, TimeInterval i1, TimeInterval i2) {
    e.validate();
    const auto [a1, b1] = indices(e, i1);
    const auto [a2, b2] = indices(e, i2);
    if (a1 < b2 && a2 < b1) {
        throw DomainError("increment intervals overlap");
    }
    return sample_covariance(increments(e, a1, b1), increments(e, a2, b2));
}

std::vector<double> values_at(const Ensemble& e, double t) {
    e.validate();
    const std::size_t k = e.grid.index_of(t);
    std::vector<double> out;
    out.reserve(e.paths.size());
    for (const auto& p : e.paths) out.push_back(p.positions[k]);
    return out;
}

Estimate position_covariance(const Ensemble& e, double t1, double t2) {
    return sample_covariance(values_at(e, t1), values_at(e, t2));
}

std::vector<TailRatioRow> tail_ratio_table(HurstExponent h, double t, std::span<const double> levels) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0) || (i > 0 && !(levels[i] > levels[i - 1]))) {
            throw DomainError("tail levels must be positive and increasing");
        }
    }
    const fbm::Params fbm_p(h);
    const fbm::Params bm_p(HurstExponent(0.5));
    std::vector<TailRatioRow> rows;
    for (double l : levels) {
        const double lf = fbm::log_tail_probability(fbm_p, t, l);
        const double lb = fbm::log_tail_probability(bm_p, t, l);
        const double li = fim::log_tail_probability(h, t, l);
        rows.push_back({l, lf - lb, li - lb, li - lf});
    }
    return rows;
}

std::vector<DivergenceRatioRow> divergence_ratio_table(HurstExponent h, std::span<const double> times) {
    const HurstExponent half(0.5);
    std::vector<DivergenceRatioRow> rows;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (!(t > 1.0) || (i > 0 && !(t > times[i - 1]))) {
            throw DomainError("divergence times must exceed 1 and increase");
        }
        const double bm = fbm::kl(half, t);
        const double fb = fbm::kl(h, t);
        const double fi = fim::kl(h, t);
        rows.push_back({t, fb / bm, fi / bm, fi / fb});
    }
    return rows;
}

double fim_bm_divergence_limit(HurstExponent h) { return 2.0 * (1.0 - h); }

std::string_view to_string(Trend t) noexcept {
    switch (t) {
    case Trend::Increasing: return "increasing";
    case Trend::Decreasing: return "decreasing";
    case Trend::Constant: return "constant";
    case Trend::Mixed: return "mixed";
    }
    return "mixed";
}

Trend trend(std::span<const double> values) {
    if (values.size() < 2) return Trend::Constant;
    // Steps within a few ulps of rounding noise count as ties, so closed forms
    // that are constant analytically classify as Constant.
    constexpr double kTieRelTol = 1e-12;
    bool up = true, down = true, flat = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double a = values[i - 1], b = values[i];
        const bool tie = std::abs(b - a) <= kTieRelTol * std::max(std::abs(a), std::abs(b));
        up = up && !tie && b > a;
        down = down && !tie && b < a;
        flat = flat && tie;
    }
    if (up) return Trend::Increasing;
    if (down) return Trend::Decreasing;
    if (flat) return Trend::Constant;
    return Trend::Mixed;
}

} // namespace selfsim::stats
