#include "graphheat/parametrix.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace graphheat {

namespace {

// Stand-in exponent for unreachable pairs: exp(-kFarAway/t) underflows to
// exactly 0 for any sane t while kFarAway/t^2 stays finite.
constexpr double kFarAway = 1e30;

// Shared immutable data captured by the Gaussian parametrix closures.
struct GaussianData {
  const WeightedGraph* g;
  Metric metric;
  double theta_min;
  double laplacian_bound;  // A = max mu/theta on the window
  std::size_t max_degree;
  double shell_width;  // per-edge metric cost lower bound (>= delta)
  std::size_t n;
  std::vector<double> c;     // theta(x) theta(y) d^2(x,y), row-major
  std::vector<double> pref;  // 1/sqrt(theta(x) theta(y)), row-major

  double value(VertexIndex x, VertexIndex y, double t) const {
    if (t < 0.0) raise(Errc::invalid_params, "time must be >= 0");
    if (t == 0.0) return x == y ? 1.0 / g->theta(x) : 0.0;
    return pref[x * n + y] * std::exp(-c[x * n + y] / t);
  }

  double heat_op(VertexIndex x, VertexIndex y, double t) const {
    if (t < 0.0) raise(Errc::invalid_params, "time must be >= 0");
    if (t == 0.0) return g->laplacian_kernel(x, y) / g->theta(y);
    double hxy = value(x, y, t);
    double lap = g->strength(x) * hxy;
    for (const auto& nb : g->neighbors(x)) lap -= nb.w * value(nb.to, y, t);
    lap /= g->theta(x);
    return lap + c[x * n + y] / (t * t) * hxy;
  }

  // Shell-counted tail of sum_{d(x,y) > n0*shell} value(x,y;t) theta(y):
  // there are at most N^{m+1} vertices in metric shell m, and
  // e^{-c/2t} sqrt(theta(y)) <= sqrt(t/e) / (sqrt(theta(x)) d(x,y)).
  double value_tail_from_shell(VertexIndex x, double t, int n0) const {
    if (t <= 0.0) return 0.0;
    const double eta = theta_min;
    const double delta = shell_width;
    const double front =
        std::sqrt(t / std::exp(1.0)) / (g->theta(x) * std::max(1, n0) * delta);
    const double logN = std::log(static_cast<double>(std::max<std::size_t>(max_degree, 2)));
    double sum = 0.0;
    for (int m = n0; m < n0 + 100000; ++m) {
      double loge = (m + 1) * logN - (eta * m * delta) * (eta * m * delta) / (2.0 * t);
      double term = std::exp(loge);
      sum += term;
      if (term <= 1e-18 * sum && m > n0 + 4) break;
    }
    return front * sum;
  }

  double support_radius(VertexIndex x, double t, double tail_tol) const {
    if (!(tail_tol > 0.0)) raise(Errc::invalid_params, "tail_tol must be > 0");
    if (t <= 0.0) return shell_width;  // point mass at t = 0
    // doubling then bisection on the shell index
    int hi = 1;
    while (value_tail_from_shell(x, t, hi) > tail_tol) {
      hi *= 2;
      if (hi > (1 << 24)) raise(Errc::quadrature_not_converged, "support radius too large");
    }
    int lo = hi / 2;  // tail(lo) > tol or lo == 0
    while (hi - lo > 1) {
      int mid = lo + (hi - lo) / 2;
      if (value_tail_from_shell(x, t, mid) > tail_tol)
        lo = mid;
      else
        hi = mid;
    }
    return hi * shell_width;
  }

  // sup over 0 < t <= t0 of (c/t^2) e^{-c/t}, minimized over c >= c_min.
  static double dt_term_bound(double c_min, double t0) {
    const double e2 = std::exp(2.0);
    if (t0 >= c_min / 2.0) return 4.0 / (c_min * e2);
    return c_min / (t0 * t0) * std::exp(-c_min / t0);
  }

  double lh_bound(double t0) const {
    double c_min = theta_min * theta_min * metric.delta_lower() * metric.delta_lower();
    return 2.0 * laplacian_bound / theta_min + dt_term_bound(c_min, t0) / theta_min;
  }

  void sample_heat_op(double s, double* out) const {
    if (s == 0.0) {
      std::fill(out, out + n * n, 0.0);
      for (VertexIndex z = 0; z < n; ++z) {
        out[z * n + z] = g->strength(z) / (g->theta(z) * g->theta(z));
        for (const auto& nb : g->neighbors(z))
          out[z * n + nb.to] = -nb.w / (g->theta(z) * g->theta(nb.to));
      }
      return;
    }
    // value matrix first (vectorized exp), then one sparse Laplacian pass.
    // Flush underflowed tails to exact zeros: subnormals in the dense
    // products would stall the convolution engine.
    Eigen::Map<const Eigen::ArrayXd> cm(c.data(), n * n);
    Eigen::Map<const Eigen::ArrayXd> pm(pref.data(), n * n);
    Eigen::ArrayXd h = (-cm / s).exp() * pm;
    h = (h > 1e-290).select(h, 0.0);
    Eigen::Map<Eigen::ArrayXd> om(out, n * n);
    om = cm * (1.0 / (s * s)) * h;  // the d/dt part
    for (VertexIndex z = 0; z < n; ++z) {
      const double* hz = h.data() + z * n;
      double* oz = out + z * n;
      const double mu_over_theta = g->strength(z) / g->theta(z);
      for (std::size_t u = 0; u < n; ++u) oz[u] += mu_over_theta * hz[u];
      for (const auto& nb : g->neighbors(z)) {
        const double* hv = h.data() + nb.to * n;
        const double w_over_theta = nb.w / g->theta(z);
        for (std::size_t u = 0; u < n; ++u) oz[u] -= w_over_theta * hv[u];
      }
    }
  }
};

}  // namespace

Parametrix dirac_parametrix(const WeightedGraph& g) {
  auto rep = check_assumptions(g);
  if (!(rep.theta_min > 0.0)) raise(Errc::assumption_violated, "theta must be bounded below");
  Parametrix p;
  p.order = 0;
  p.n = g.size();
  const WeightedGraph* gp = &g;
  p.value = [gp](VertexIndex x, VertexIndex y, double t) {
    if (t < 0.0) raise(Errc::invalid_params, "time must be >= 0");
    gp->check_index(x);
    gp->check_index(y);
    return x == y ? 1.0 / gp->theta(x) : 0.0;
  };
  p.heat_op = [gp](VertexIndex x, VertexIndex y, double t) {
    if (t < 0.0) raise(Errc::invalid_params, "time must be >= 0");
    return gp->laplacian_kernel(x, y) / gp->theta(y);
  };
  p.support_radius = [](VertexIndex, double, double) { return 1.0; };
  const double bound = rep.laplacian_bound / rep.theta_min;
  p.lh_bound = [bound](double) { return bound; };
  const std::size_t n = g.size();
  p.sample_heat_op = [gp, n](double, double* out) {
    std::fill(out, out + n * n, 0.0);
    for (VertexIndex z = 0; z < n; ++z) {
      out[z * n + z] = gp->strength(z) / (gp->theta(z) * gp->theta(z));
      for (const auto& nb : gp->neighbors(z))
        out[z * n + nb.to] = -nb.w / (gp->theta(z) * gp->theta(nb.to));
    }
  };
  p.value_l1_tail = [](VertexIndex, double, double hops) {
    return hops >= 0.0 ? 0.0 : 1.0;  // point support
  };
  p.heat_op_l1_tail = [bound](VertexIndex, double, double hops) {
    return hops >= 1.0 ? 0.0 : 2.0 * bound;  // supported on x and its neighbors
  };
  return p;
}

Parametrix gaussian_parametrix(const WeightedGraph& g, const Metric& metric) {
  if (!(metric.delta_lower() > 0.0))
    raise(Errc::metric_lower_bound_missing,
          "gaussian parametrix needs a certified positive metric lower bound");
  auto rep = check_assumptions(g);
  if (!(rep.theta_min > 0.0) || !(rep.laplacian_bound >= 0.0) || rep.max_degree == 0)
    raise(Errc::assumption_violated, "graph violates the standing assumptions");

  auto data = std::make_shared<GaussianData>();
  data->g = &g;
  data->metric = metric;
  data->theta_min = rep.theta_min;
  data->laplacian_bound = rep.laplacian_bound;
  data->max_degree = rep.max_degree;
  data->shell_width =
      metric.min_edge_cost() > 0.0 ? metric.min_edge_cost() : metric.delta_lower();
  data->n = g.size();
  data->c.resize(g.size() * g.size());
  data->pref.resize(g.size() * g.size());
  for (VertexIndex x = 0; x < g.size(); ++x)
    for (VertexIndex y = 0; y < g.size(); ++y) {
      double d = metric.dist(x, y);
      if (x != y && d < metric.delta_lower())
        raise(Errc::metric_lower_bound_missing, "metric violates its declared lower bound");
      data->c[x * g.size() + y] =
          d == kUnreachable ? kFarAway : g.theta(x) * g.theta(y) * d * d;
      data->pref[x * g.size() + y] = 1.0 / std::sqrt(g.theta(x) * g.theta(y));
    }

  Parametrix p;
  p.order = 0;
  p.n = g.size();
  p.value = [data](VertexIndex x, VertexIndex y, double t) { return data->value(x, y, t); };
  p.heat_op = [data](VertexIndex x, VertexIndex y, double t) { return data->heat_op(x, y, t); };
  p.support_radius = [data](VertexIndex x, double t, double tol) {
    return data->support_radius(x, t, tol);
  };
  p.lh_bound = [data](double t0) { return data->lh_bound(t0); };
  p.sample_heat_op = [data](double s, double* out) { data->sample_heat_op(s, out); };
  p.value_l1_tail = [data](VertexIndex x, double t, double hops) {
    int n0 = std::max(1, static_cast<int>(std::floor(hops)));
    return data->value_tail_from_shell(x, t, n0);
  };
  p.heat_op_l1_tail = [data](VertexIndex x, double t, double hops) {
    // every term of heat_op carries a Gaussian centred at x or a neighbor
    // of x, so shift the shell index by one edge and scale by the pointwise
    // heat-op envelope.
    int n0 = std::max(1, static_cast<int>(std::floor(hops)) - 1);
    double scale = 2.0 * data->laplacian_bound / data->theta_min +
                   1.0 / (std::exp(1.0) * std::max(t, 1e-300) * data->theta_min);
    return scale * data->value_tail_from_shell(x, t, n0);
  };
  return p;
}

double chain_coefficient(const WeightedGraph& g, VertexIndex x, VertexIndex y, int ell) {
  g.check_index(x);
  g.check_index(y);
  if (ell < 1) raise(Errc::invalid_params, "chain length must be >= 1");
  if (g.is_window()) {
    auto depth = g.hop_distances(x, ell);
    for (VertexIndex v = 0; v < g.size(); ++v)
      if (depth[v] >= 0 && depth[v] <= ell - 1 && !g.row_complete(v))
        raise(Errc::region_too_small, "chain of length " + std::to_string(ell) +
                                          " leaves the materialized ball around " + g.id(x));
  }
  std::vector<long double> w(g.size(), 0.0L), next(g.size());
  w[x] = 1.0L;
  for (int step = 0; step < ell; ++step) {
    for (VertexIndex v = 0; v < g.size(); ++v) {
      long double acc = w[v] * g.strength(v) / g.theta(v);
      for (const auto& nb : g.neighbors(v)) acc -= w[nb.to] * (nb.w / g.theta(nb.to));
      next[v] = acc;
    }
    std::swap(w, next);
  }
  return static_cast<double>(w[y]);
}

}  // namespace graphheat
