#include "selfsim/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoef{
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5};

// zeta(2) .. zeta(30)
constexpr std::array<double, 29> kZeta{
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915, 1.0369277551433699263,
    1.0173430619844491397, 1.0083492773819228268, 1.0040773561979443394, 1.0020083928260822144,
    1.0009945751278180853, 1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519, 1.0000076371976378998,
    1.0000038172932649998, 1.0000019082127165539, 1.0000009539620338728, 1.0000004769329867878,
    1.0000002384505027277, 1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
    1.0000000149015548284, 1.0000000074507117898, 1.0000000037253340248, 1.0000000018626597235,
    1.0000000009313274324};

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesRadius = 0.2;

double lanczos_log_gamma(double x) {
    const double z = x - 1.0;
    double sum = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
        sum += kLanczosCoef[i] / (z + static_cast<double>(i));
    }
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

// ln Gamma(1 + z) = -gamma z + sum_{k>=2} (-1)^k zeta(k) z^k / k, |z| <= 0.2
double log_gamma_one_plus(double z) {
    double acc = 0.0;
    double power = z;
    for (std::size_t i = 0; i < kZeta.size(); ++i) {
        power *= z;
        const double k = static_cast<double>(i + 2);
        acc += ((i % 2 == 0) ? 1.0 : -1.0) * kZeta[i] * power / k;
    }
    return -kEulerGamma * z + acc;
}

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Series for P(a, x) without the exp(-x) x^a / Gamma(a) prefactor; valid for x < a + 1.
double lower_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            return sum;
        }
    }
    throw NumericalError("incomplete gamma series did not converge");
}

// Continued fraction for Q(a, x) without the prefactor (modified Lentz); valid for x >= a + 1.
double upper_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            return h;
        }
    }
    throw NumericalError("incomplete gamma continued fraction did not converge");
}

void check_incomplete_args(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("incomplete gamma: shape must be positive and finite");
    }
    if (!(x >= 0.0)) {
        throw DomainError("incomplete gamma: x must be non-negative");
    }
}

double log_prefactor(double a, double x) { return -x + a * std::log(x) - log_gamma(a); }

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("log_gamma: argument must be positive");
    }
    if (std::isinf(x)) {
        return x;
    }
    if (std::abs(x - 1.0) <= kSeriesRadius) {
        return log_gamma_one_plus(x - 1.0);
    }
    if (std::abs(x - 2.0) <= kSeriesRadius) {
        return std::log1p(x - 2.0) + log_gamma_one_plus(x - 2.0);
    }
    if (x < 0.5) {
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    return lanczos_log_gamma(x);
}

double regularized_lower_incomplete_gamma(double a, double x) {
    check_incomplete_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) {
        return std::min(1.0, std::exp(log_prefactor(a, x)) * lower_series(a, x));
    }
    return 1.0 - std::exp(log_prefactor(a, x)) * upper_fraction(a, x);
}

double regularized_upper_incomplete_gamma(double a, double x) {
    check_incomplete_args(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) {
        return 1.0 - std::exp(log_prefactor(a, x)) * lower_series(a, x);
    }
    return std::exp(log_prefactor(a, x)) * upper_fraction(a, x);
}

double log_regularized_upper_incomplete_gamma(double a, double x) {
    check_incomplete_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    if (x < a + 1.0) {
        return std::log1p(-std::exp(log_prefactor(a, x)) * lower_series(a, x));
    }
    return log_prefactor(a, x) + std::log(upper_fraction(a, x));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

} // namespace selfsim
