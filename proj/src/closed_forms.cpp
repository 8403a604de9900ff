#include "graphheat/closed_forms.hpp"

#include <cmath>
#include <string>

#include "graphheat/errors.hpp"
#include "graphheat/special_functions.hpp"

namespace graphheat {

namespace {

using uint128 = unsigned __int128;

// Largest k with (q+1)^k safely inside 128 bits; b_k(r) <= (q+1)^k.
int max_safe_order(int q) {
  return static_cast<int>(120.0 * std::log(2.0) / std::log(static_cast<double>(q + 1)));
}

void check_tree_params(int q, int r) {
  if (q < 1) raise(Errc::invalid_params, "tree kernels need q >= 1");
  if (r < 0) raise(Errc::invalid_params, "distance r must be >= 0");
}

}  // namespace

double lattice_kernel(int j, double t) {
  if (j < 0) raise(Errc::invalid_params, "lattice distance must be >= 0");
  if (!(t >= 0.0)) raise(Errc::invalid_params, "time must be >= 0");
  return bessel_i_scaled(j, 2.0 * t);
}

std::vector<double> tree_walk_counts(int q, int r, int k_max) {
  check_tree_params(q, r);
  if (k_max < 0) raise(Errc::invalid_params, "k_max must be >= 0");
  if (k_max > max_safe_order(q))
    raise(Errc::invalid_params,
          "k_max " + std::to_string(k_max) + " overflows exact walk counts for q = " +
              std::to_string(q));
  const int span = k_max + r + 2;
  std::vector<uint128> cur(span, 0), nxt(span, 0);
  cur[0] = 1;  // b_0
  std::vector<double> out;
  out.reserve(k_max + 1);
  out.push_back(r == 0 ? 1.0 : 0.0);
  for (int k = 1; k <= k_max; ++k) {
    nxt[0] = static_cast<uint128>(q + 1) * cur[1];
    for (int d = 1; d + 1 < span; ++d) nxt[d] = cur[d - 1] + static_cast<uint128>(q) * cur[d + 1];
    nxt[span - 1] = cur[span - 2];
    std::swap(cur, nxt);
    out.push_back(static_cast<double>(cur[r]));
  }
  return out;
}

TreeKernelValue tree_kernel(int q, int r, double t, double tail_tol) {
  check_tree_params(q, r);
  if (!(t >= 0.0)) raise(Errc::invalid_params, "time must be >= 0");
  if (!(tail_tol > 0.0)) raise(Errc::invalid_params, "tail_tol must be > 0");
  const double sq = std::sqrt(static_cast<double>(q));
  const double arg = 2.0 * sq * t;
  // e^{-(q+1)t} I_nu(arg) = pref * [e^{-arg} I_nu(arg)] with pref <= 1
  const double pref = std::exp(-(sq - 1.0) * (sq - 1.0) * t);
  TreeKernelValue out;
  out.value = pref * std::pow(q, -0.5 * r) * bessel_i_scaled(r, arg);
  if (q == 1) return out;  // the correction series carries a factor q-1 = 0
  double correction = 0.0;
  for (int j = 1; j < 100000; ++j) {
    double term = std::pow(q, -0.5 * (r + 2 * j)) * bessel_i_scaled(2 * j + r, arg);
    // I_nu decreases in nu, so the remaining terms are dominated by a
    // geometric series with ratio 1/q; (q-1) * term_j / (1 - 1/q) = q * term_j.
    double dropped = pref * q * term;
    if (dropped <= tail_tol) {
      out.tail_bound = dropped;
      break;
    }
    correction += term;
    out.terms = j;
  }
  out.value -= pref * (q - 1.0) * correction;
  return out;
}

double tree_kernel_walk_series(int q, int r, double t, double tail_tol) {
  check_tree_params(q, r);
  if (!(t >= 0.0)) raise(Errc::invalid_params, "time must be >= 0");
  // b_k(r) <= (q+1)^k, so the dropped tail of e^{-(q+1)t} sum b_k t^k/k! is
  // at most ((q+1)t)^{K+1}/(K+1)!.
  const double a = (q + 1.0) * t;
  int k_needed = 0;
  double tail = 1.0;
  while (tail > tail_tol) {
    ++k_needed;
    tail *= a / k_needed;
    if (k_needed > max_safe_order(q))
      raise(Errc::invalid_params, "walk series needs more exact orders than 128-bit counts allow");
  }
  auto b = tree_walk_counts(q, r, k_needed);
  long double sum = 0.0L;
  long double pow_t = 1.0L;
  long double fact = 1.0L;
  for (int k = 0; k <= k_needed; ++k) {
    if (k > 0) {
      pow_t *= t;
      fact *= k;
    }
    sum += static_cast<long double>(b[k]) * pow_t / fact;
  }
  return static_cast<double>(std::exp(-static_cast<long double>(a)) * sum);
}

std::vector<double> tree_walk_generating_series(int q, int r, int k_max) {
  check_tree_params(q, r);
  const int n = k_max + 3;
  using Series = std::vector<long double>;
  auto mul = [&](const Series& a, const Series& b) {
    Series c(n, 0.0L);
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0.0L) continue;
      for (int j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  auto inv = [&](const Series& a) {
    Series c(n, 0.0L);
    c[0] = 1.0L / a[0];
    for (int m = 1; m < n; ++m) {
      long double s = 0.0L;
      for (int i = 1; i <= m; ++i) s += a[i] * c[m - i];
      c[m] = -s / a[0];
    }
    return c;
  };
  // sqrt(1 - 4q u^2) via the binomial series
  Series root(n, 0.0L);
  root[0] = 1.0L;
  long double coeff = 1.0L;
  for (int m = 1; 2 * m < n; ++m) {
    coeff *= (0.5L - (m - 1)) / m;
    root[2 * m] = coeff * std::pow(-4.0L * q, m);
  }
  Series den(n, 0.0L);
  for (int i = 0; i < n; ++i) den[i] = (q + 1.0L) * root[i];
  den[0] += q - 1.0L;
  Series pre = inv(den);
  for (auto& c : pre) c *= 2.0L * q;
  // (1 - sqrt(1-4q u^2)) / (2qu): odd series
  Series hop(n, 0.0L);
  for (int i = 1; i < n; i += 2)
    if (i + 1 < n) hop[i] = -root[i + 1] / (2.0L * q);
  Series acc = pre;
  for (int p = 0; p < r; ++p) acc = mul(acc, hop);
  std::vector<double> out(k_max + 1);
  for (int k = 0; k <= k_max; ++k) out[k] = static_cast<double>(acc[k]);
  return out;
}

}  // namespace graphheat
