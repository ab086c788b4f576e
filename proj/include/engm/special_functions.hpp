#pragma once

namespace engm {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
/// Series for x < a + 1, Lentz continued fraction otherwise.
/// Throws Error(Domain) unless a > 0 and x >= 0.
double igamc(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double igam(double a, double x);

/// Complementary error function (the C library's erfc).
double erfc(double x) noexcept;

/// Standard normal cumulative distribution.
double normal_cdf(double x) noexcept;

}  // namespace engm
