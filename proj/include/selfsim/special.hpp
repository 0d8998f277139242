#pragma once

namespace selfsim {

/// Natural log of the Gamma function for x > 0.
/// Lanczos (g = 607/128) away from the zeros at 1 and 2, where a Taylor
/// series in zeta values keeps the relative error small.
double log_gamma(double x);

/// P(a, x) = gamma(a, x) / Gamma(a), the CDF of Gamma(a, 1) at x.
double regularized_lower_incomplete_gamma(double shape, double x);

/// Q(a, x) = 1 - P(a, x), computed directly so that tails keep their
/// relative accuracy.
double regularized_upper_incomplete_gamma(double shape, double x);

/// ln Q(a, x); finite even where Q itself underflows.
double log_regularized_upper_incomplete_gamma(double shape, double x);

/// Standard normal CDF.
double normal_cdf(double x);

} // namespace selfsim
