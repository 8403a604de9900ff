#include "graphheat/special_functions.hpp"

#include <cmath>

#include "graphheat/errors.hpp"

namespace graphheat {

namespace {

// Leading series term (x/2)^n / n! times e^{shift}, via logs when the
// direct product would leave the normal range.
long double leading_term(int n, double x, double shift) {
  const long double half = static_cast<long double>(x) / 2.0L;
  if (n > 150) {
    long double lg = static_cast<long double>(n) * std::log(half) -
                     std::lgamma(static_cast<long double>(n) + 1.0L) +
                     static_cast<long double>(shift);
    return std::exp(lg);
  }
  long double term = std::exp(static_cast<long double>(shift));
  for (int i = 1; i <= n; ++i) term *= half / i;
  return term;
}

double bessel_series(int n, double x, double shift) {
  if (n < 0) raise(Errc::invalid_params, "bessel_i needs n >= 0");
  if (!std::isfinite(x) || x < 0.0) raise(Errc::non_finite_weight, "bessel_i needs finite x >= 0");
  if (x == 0.0) return (n == 0) ? std::exp(shift) : 0.0;
  const long double q = static_cast<long double>(x) * x / 4.0L;  // term ratio numerator
  long double term = leading_term(n, x, shift);
  long double sum = term;
  for (int k = 1; k < 40000; ++k) {
    term *= q / (static_cast<long double>(k) * (n + k));
    sum += term;
    if (term < 1e-16L * sum) break;
  }
  return static_cast<double>(sum);
}

}  // namespace

double bessel_i(int n, double x) { return bessel_series(n, x, 0.0); }

double bessel_i_scaled(int n, double x) { return bessel_series(n, x, -x); }

}  // namespace graphheat
