#include "engm/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "engm/error.hpp"

namespace engm {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 1'000'000;
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

void check_domain(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || std::isinf(a)) {
    throw Error(ErrorCode::Domain, "incomplete gamma needs a > 0 and x >= 0 (a=" + std::to_string(a) +
                                       ", x=" + std::to_string(x) + ")");
  }
}

// exp(-x + a*log(x) - lgamma(a)), the common prefactor.
double prefactor(double a, double x) { return std::exp(-x + a * std::log(x) - std::lgamma(a)); }

// P(a, x) by the power series sum x^n / (a (a+1) ... (a+n)).
double lower_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) return sum * prefactor(a, x);
  }
  throw Error(ErrorCode::Domain, "incomplete gamma series did not converge");
}

// Q(a, x) by the continued fraction, evaluated with the modified Lentz method.
double upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return prefactor(a, x) * h;
  }
  throw Error(ErrorCode::Domain, "incomplete gamma continued fraction did not converge");
}

}  // namespace

double igamc(double a, double x) {
  check_domain(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_fraction(a, x);
}

double igam(double a, double x) {
  check_domain(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_fraction(a, x);
}

double erfc(double x) noexcept { return std::erfc(x); }

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace engm
