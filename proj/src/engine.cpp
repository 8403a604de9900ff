#include "graphheat/engine.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace graphheat {

namespace {

using MatrixRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) raise(Errc::invalid_params, "time must be >= 0 and finite");
}

// Rows within hop depth max_depth-1 of x must be complete for chains of
// length max_depth to be exact.
void require_chain_region(const WeightedGraph& g, VertexIndex x, int order) {
  if (!g.is_window() || order < 1) return;
  auto depth = g.hop_distances(x, order);
  for (VertexIndex v = 0; v < g.size(); ++v)
    if (depth[v] >= 0 && depth[v] <= order - 1 && !g.row_complete(v))
      raise(Errc::region_too_small,
            "series order " + std::to_string(order) + " needs a complete ball of radius " +
                std::to_string(order) + " around " + g.id(x));
}

}  // namespace

double neumann_tail_majorant(double c, double norm1, double t, int k, int from) {
  if (from < 1) from = 1;
  if (!(c >= 0.0) || !(norm1 >= 0.0)) raise(Errc::invalid_params, "bounds must be >= 0");
  require_time(t);
  long double term = c;
  for (int i = 1; i <= k; ++i) term *= t / i;                           // t^k / k!
  for (int l = 2; l <= from; ++l) term *= norm1 * t / (k + l - 1);      // up the ladder
  return static_cast<double>(term * std::exp(static_cast<long double>(norm1) * t));
}

int neumann_tail_order(double c, double norm1, double t, int k, double tol) {
  if (!(tol > 0.0)) raise(Errc::invalid_params, "tolerance must be > 0");
  if (neumann_tail_majorant(c, norm1, t, k, 1) <= tol) return 0;
  for (int order = 1; order < 100000; ++order)
    if (neumann_tail_majorant(c, norm1, t, k, order) <= tol) return order;
  raise(Errc::quadrature_not_converged, "neumann_tail_order: tolerance unreachably tight");
}

TimeGridFunction::TimeGridFunction(const WeightedGraph& g, double t_max, std::size_t intervals)
    : g_(&g), t_max_(t_max), m_(intervals) {
  require_time(t_max);
  if (intervals < 1) raise(Errc::invalid_params, "grid needs at least one interval");
  values_.assign((m_ + 1) * g.size(), 0.0);
}

void TimeGridFunction::require_compatible(const TimeGridFunction& other) const {
  if (g_ != other.g_) raise(Errc::ball_mismatch, "functions sampled on different windows");
  if (m_ != other.m_ || t_max_ != other.t_max_)
    raise(Errc::grid_mismatch, "functions sampled on different grids");
}

TimeGridFunction sample_family(const WeightedGraph& g, const SpaceTimeFn& f, VertexIndex base,
                               double t_max, std::size_t intervals) {
  g.check_index(base);
  TimeGridFunction out(g, t_max, intervals);
  for (std::size_t j = 0; j <= intervals; ++j) {
    double s = out.node_time(j);
    for (VertexIndex v = 0; v < g.size(); ++v) out.at(v, j) = f(v, base, s);
  }
  return out;
}

TimeGridFunction convolve_step(const SpaceTimeFn& f, const TimeGridFunction& inner) {
  const WeightedGraph& g = inner.graph();
  const std::size_t n = g.size();
  const std::size_t m = inner.intervals();
  const double h = inner.t_max() / static_cast<double>(m);
  TimeGridFunction out(g, inner.t_max(), m);
  for (std::size_t i = 1; i <= m; ++i) {
    for (VertexIndex z = 0; z < n; ++z) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        double w = (j == 0 || j == i) ? 0.5 : 1.0;
        double s = inner.node_time(i - j);
        double spatial = 0.0;
        for (VertexIndex u = 0; u < n; ++u) spatial += f(z, u, s) * g.theta(u) * inner.at(u, j);
        acc += w * spatial;
      }
      out.at(z, i) = h * acc;
    }
  }
  return out;
}

namespace {

double convolve_on_grid(const WeightedGraph& g, const SpaceTimeFn& f1, const SpaceTimeFn& f2,
                        VertexIndex x, VertexIndex y, double t, std::size_t m) {
  const double h = t / static_cast<double>(m);
  double acc = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    double r = h * static_cast<double>(j);
    double spatial = 0.0;
    for (VertexIndex z = 0; z < g.size(); ++z)
      spatial += f1(x, z, t - r) * f2(z, y, r) * g.theta(z);
    acc += (j == 0 || j == m) ? 0.5 * spatial : spatial;
  }
  return h * acc;
}

}  // namespace

ConvolveResult convolve(const WeightedGraph& g, const SpaceTimeFn& f1, const SpaceTimeFn& f2,
                        VertexIndex x, VertexIndex y, double t, std::size_t intervals) {
  g.check_index(x);
  g.check_index(y);
  require_time(t);
  if (intervals < 2 || intervals % 2 != 0)
    raise(Errc::grid_mismatch, "convolve needs an even interval count >= 2");
  if (t == 0.0) return {0.0, 0.0};
  double full = convolve_on_grid(g, f1, f2, x, y, t, intervals);
  double half = convolve_on_grid(g, f1, f2, x, y, t, intervals / 2);
  return {full, std::abs(full - half) / 3.0};
}

double iterated_convolution(const WeightedGraph& g, const SpaceTimeFn& f, int fold, VertexIndex x,
                            VertexIndex y, double t, std::size_t intervals) {
  g.check_index(x);
  g.check_index(y);
  require_time(t);
  if (fold < 1) raise(Errc::invalid_params, "fold must be >= 1");
  if (fold == 1) return f(x, y, t);
  TimeGridFunction level = sample_family(g, f, y, t, intervals);
  for (int l = 2; l <= fold; ++l) level = convolve_step(f, level);
  return level.at(x, intervals);
}

std::vector<double> heat_kernel_dirac_row(const WeightedGraph& g, VertexIndex x, double t,
                                          double tol, KernelEstimate* info,
                                          std::optional<int> order_override) {
  g.check_index(x);
  require_time(t);
  if (!(tol > 0.0)) raise(Errc::invalid_params, "tolerance must be > 0");
  const std::size_t n = g.size();
  std::vector<double> row(n, 0.0);
  if (t == 0.0) {
    row[x] = 1.0 / g.theta(x);
    if (info) *info = {row[x], 0, 0.0, 0.0, 0.0, 0.0, 0.0};
    return row;
  }
  const auto rep = check_assumptions(g);
  const double c_bound = rep.laplacian_bound / rep.theta_min;  // sup |delta_x(y)/theta(y)|
  const double norm1 = 2.0 * rep.laplacian_bound;              // sup_x sum_y |delta_x(y)|
  const int order =
      order_override ? *order_override : neumann_tail_order(c_bound, norm1, t, 0, tol);
  require_chain_region(g, x, order);

  // long-double chain iteration: w <- D^T w keeps the alternating sums well
  // clear of the 1e-12 mass-conservation budget
  std::vector<long double> w(n, 0.0L), next(n, 0.0L);
  std::vector<long double> acc(n, 0.0L);
  w[x] = 1.0L;
  acc[x] = 1.0L / static_cast<long double>(g.theta(x));
  long double coeff = 1.0L;
  for (int l = 1; l <= order; ++l) {
    for (VertexIndex v = 0; v < n; ++v) {
      long double s = w[v] * g.strength(v) / g.theta(v);
      for (const auto& nb : g.neighbors(v)) s -= w[nb.to] * (nb.w / g.theta(nb.to));
      next[v] = s;
    }
    std::swap(w, next);
    coeff *= static_cast<long double>(-t) / l;
    for (VertexIndex v = 0; v < n; ++v) acc[v] += coeff * w[v] / g.theta(v);
  }
  for (VertexIndex v = 0; v < n; ++v) row[v] = static_cast<double>(acc[v]);
  if (info) {
    // dropped terms: |sum_{l>order} (t^l/l!) c_l/theta| <= sum_{l>order} c norm1^{l-1} t^l/l!,
    // which is the k = 1 ladder of the majorant
    double tail = neumann_tail_majorant(c_bound, norm1, t, 1, order + 1);
    *info = KernelEstimate{0.0, order, tail, 0.0, 0.0, 0.0, tail};
  }
  return row;
}

KernelEstimate heat_kernel_dirac(const WeightedGraph& g, VertexIndex x, VertexIndex y, double t,
                                 double tol, std::optional<int> order_override) {
  g.check_index(y);
  KernelEstimate est;
  auto row = heat_kernel_dirac_row(g, x, t, tol, &est, order_override);
  est.value = row[y];
  est.correction = est.value - (x == y ? 1.0 / g.theta(x) : 0.0);
  return est;
}

LeadingTerm small_time_leading_term(const WeightedGraph& g, VertexIndex x, VertexIndex y,
                                    double t) {
  g.check_index(x);
  g.check_index(y);
  require_time(t);
  auto depth = g.hop_distances(x);
  if (depth[y] < 0) raise(Errc::invalid_params, "vertices are not connected in the region");
  const int r = depth[y];
  if (r < 1) raise(Errc::invalid_params, "leading term needs distinct vertices (r >= 1)");
  const auto rep = check_assumptions(g);
  const double c_bound = rep.laplacian_bound / rep.theta_min;
  const double norm1 = 2.0 * rep.laplacian_bound;
  const int order = std::max(r + 8, neumann_tail_order(c_bound, norm1, std::max(t, 1e-3), 0, 1e-16));
  require_chain_region(g, x, order);

  std::vector<long double> w(g.size(), 0.0L), next(g.size(), 0.0L);
  w[x] = 1.0L;
  long double lead = 0.0L;
  long double envelope = 0.0L;  // sum_{l>r} t^{l-r-1}/l! |c_l| / theta(y)
  long double fact = 1.0L;
  long double t_pow = 1.0L;  // t^{l-r-1}, starting at l = r+1
  for (int l = 1; l <= order; ++l) {
    for (VertexIndex v = 0; v < g.size(); ++v) {
      long double s = w[v] * g.strength(v) / g.theta(v);
      for (const auto& nb : g.neighbors(v)) s -= w[nb.to] * (nb.w / g.theta(nb.to));
      next[v] = s;
    }
    std::swap(w, next);
    fact *= l;
    if (l == r) lead = w[y] / (g.theta(y) * fact) * (r % 2 == 0 ? 1.0L : -1.0L);
    if (l > r) {
      envelope += t_pow / fact * std::abs(w[y]) / g.theta(y);
      t_pow *= t;
    }
  }
  // tail of the envelope beyond the computed orders
  double tail = neumann_tail_majorant(c_bound, norm1, std::max(t, 1e-3), 1, order + 1);
  double t_rp1 = std::pow(t, r + 1);
  LeadingTerm out;
  out.r = r;
  out.value = static_cast<double>(lead) * std::pow(t, r);
  out.bound = static_cast<double>(envelope) * t_rp1 + tail;
  return out;
}

namespace {

// One quadrature pass of the general path at a fixed grid resolution.
// Returns (H*F)(x, y; t) and reports the measured series cut.
struct PassResult {
  double correction = 0.0;
  double bound_h1 = 0.0;       // max_j sum_z |H(x,z;s_j)| theta(z)
  double early_tail = 0.0;     // certified bound on levels skipped early
};

PassResult general_pass(const WeightedGraph& g, const Parametrix& p, VertexIndex x, VertexIndex y,
                        double t, std::size_t m, int order, double norm1, double stop_eps) {
  const std::size_t n = g.size();
  const double h = t / static_cast<double>(m);
  Eigen::VectorXd theta(n);
  for (VertexIndex v = 0; v < n; ++v) theta(v) = g.theta(v);

  auto fill = [&](double s, MatrixRM& w) {
    if (p.sample_heat_op) {
      p.sample_heat_op(s, w.data());
    } else {
      for (VertexIndex z = 0; z < n; ++z)
        for (VertexIndex u = 0; u < n; ++u) w(z, u) = p.heat_op(z, u, s);
    }
  };

  // level 1: f(z, y; s_j)
  MatrixRM cur = MatrixRM::Zero(n, m + 1);
  if (order >= 1) {
    for (std::size_t j = 0; j <= m; ++j) {
      double s = h * static_cast<double>(j);
      for (VertexIndex z = 0; z < n; ++z) cur(z, j) = p.heat_op(z, y, s);
    }
  }
  MatrixRM f_sum = -cur;  // F = sum (-1)^l f^{*l}

  MatrixRM w(n, n);
  MatrixRM scaled(n, m + 1), nxt(n, m + 1);
  double early_tail = 0.0;
  double sign = -1.0;  // sign of (-1)^level, level 1 already folded in
  for (int level = 2; level <= order; ++level) {
    sign = -sign;
    scaled = theta.asDiagonal() * cur;
    MatrixRM half0 = scaled;
    half0.col(0) *= 0.5;
    nxt.setZero();
    for (std::size_t d = 0; d <= m; ++d) {
      fill(h * static_cast<double>(d), w);
      if (d == 0) {
        if (m >= 1) nxt.rightCols(m) += 0.5 * (w * scaled.rightCols(m));
      } else {
        nxt.rightCols(m + 1 - d) += w * half0.leftCols(m + 1 - d);
      }
    }
    nxt *= h;
    cur = nxt;
    f_sum += sign * cur;
    // remaining levels are bounded by the measured sup times the
    // exponential ladder; stop once that is negligible
    double level_sup = cur.cwiseAbs().maxCoeff();
    double remaining = level_sup * (std::exp(norm1 * t) - 1.0);
    if (remaining <= stop_eps) {
      early_tail = remaining;
      break;
    }
  }

  // (H * F)(x, y; t) by one more trapezoid pass
  PassResult out;
  out.early_tail = early_tail;
  Eigen::VectorXd hrow(n);
  double acc = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    double s = h * static_cast<double>(j);
    double l1 = 0.0;
    for (VertexIndex z = 0; z < n; ++z) {
      hrow(z) = p.value(x, z, t - s) * theta(z);
      l1 += std::abs(hrow(z));
    }
    out.bound_h1 = std::max(out.bound_h1, l1);
    double inner = hrow.dot(f_sum.col(j));
    acc += (j == 0 || j == m) ? 0.5 * inner : inner;
  }
  out.correction = h * acc;
  return out;
}

}  // namespace

KernelEstimate heat_kernel_general(const WeightedGraph& g, const Parametrix& p, VertexIndex x,
                                   VertexIndex y, double t, const GeneralOptions& opts) {
  g.check_index(x);
  g.check_index(y);
  require_time(t);
  if (p.n != g.size()) raise(Errc::ball_mismatch, "parametrix built on a different window");
  if (!(opts.tol > 0.0)) raise(Errc::invalid_params, "tolerance must be > 0");
  KernelEstimate est;
  if (t == 0.0) {
    est.value = p.value(x, y, 0.0);
    return est;
  }
  const std::size_t n = g.size();
  const double c_bound = p.lh_bound(t);

  // ||L_{G,x}H||_{1,theta} estimated on the window over a coarse time grid
  MatrixRM w(n, n);
  Eigen::VectorXd theta(n);
  for (VertexIndex v = 0; v < n; ++v) theta(v) = g.theta(v);
  double norm1 = 0.0;
  for (int i = 0; i <= 8; ++i) {
    double s = t * static_cast<double>(i) / 8.0;
    if (p.sample_heat_op) {
      p.sample_heat_op(s, w.data());
    } else {
      for (VertexIndex z = 0; z < n; ++z)
        for (VertexIndex u = 0; u < n; ++u) w(z, u) = p.heat_op(z, u, s);
    }
    norm1 = std::max(norm1, (w.cwiseAbs() * theta).maxCoeff());
  }
  if (norm1 <= 0.0) norm1 = 1e-12;

  const double tol_series = opts.tol / 2.0;
  const double tol_quad = opts.tol / 2.0;
  const int order = opts.order_override
                        ? *opts.order_override
                        : neumann_tail_order(c_bound, norm1, t, p.order, tol_series);
  est.series_order = order;

  double prev = std::numeric_limits<double>::quiet_NaN();
  PassResult pass;
  bool converged = false;
  for (std::size_t m = opts.initial_intervals; m <= opts.max_intervals; m *= 2) {
    pass = general_pass(g, p, x, y, t, m, order, norm1, tol_series / 16.0);
    if (!std::isnan(prev)) {
      est.quadrature_error = std::abs(pass.correction - prev) / 3.0;
      if (est.quadrature_error <= tol_quad) {
        converged = true;
        break;
      }
    }
    prev = pass.correction;
  }
  if (!converged)
    raise(Errc::quadrature_not_converged,
          "grid cap " + std::to_string(opts.max_intervals) + " reached before tolerance");

  est.correction = pass.correction;
  est.value = p.value(x, y, t) + pass.correction;
  est.series_tail_bound =
      pass.bound_h1 * t * neumann_tail_majorant(c_bound, norm1, t, p.order, order + 1) +
      pass.bound_h1 * t * pass.early_tail;

  if (g.is_window()) {
    if (!p.value_l1_tail || !p.heat_op_l1_tail)
      raise(Errc::region_too_small,
            "window computation needs the parametrix tail oracles");
    double hops = static_cast<double>(*g.window_radius());
    double tau_h = p.value_l1_tail(x, t, hops);
    double tau_f = p.heat_op_l1_tail(x, t, hops);
    double amp = std::exp(norm1 * t);
    double b_f = c_bound * std::pow(t, p.order) * amp;
    double e_f = tau_f * c_bound * std::pow(t, p.order + 1) * (1.0 + norm1 * t) * amp;
    est.spatial_tail_bound = pass.bound_h1 * t * e_f + tau_h * t * b_f;
  }
  est.total_bound = est.series_tail_bound + est.spatial_tail_bound + est.quadrature_error;
  return est;
}

}  // namespace graphheat
