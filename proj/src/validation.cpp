#include "graphheat/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "graphheat/metrics.hpp"
#include "graphheat/parametrix.hpp"

namespace graphheat {

struct MatexpOracle::Impl {
  Eigen::MatrixXd vectors;         // eigenvectors of the symmetrized Laplacian
  Eigen::VectorXd values;          // eigenvalues
  Eigen::VectorXd inv_sqrt_theta;  // theta^{-1/2}
};

MatexpOracle::MatexpOracle(const WeightedGraph& g) {
  const std::size_t n = g.size();
  if (n > 4000)
    raise(Errc::invalid_params, "dense spectral oracle is capped at 4000 vertices");
  auto impl = std::make_shared<Impl>();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  impl->inv_sqrt_theta.resize(n);
  for (VertexIndex v = 0; v < n; ++v) impl->inv_sqrt_theta(v) = 1.0 / std::sqrt(g.theta(v));
  for (VertexIndex v = 0; v < n; ++v) {
    s(v, v) = g.strength(v) / g.theta(v);
    for (const auto& nb : g.neighbors(v))
      s(v, nb.to) = -nb.w * impl->inv_sqrt_theta(v) * impl->inv_sqrt_theta(nb.to);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success)
    raise(Errc::invalid_params, "eigendecomposition failed");
  impl->vectors = solver.eigenvectors();
  impl->values = solver.eigenvalues();
  impl_ = std::move(impl);
}

double MatexpOracle::value(VertexIndex x, VertexIndex y, double t) const {
  const auto& im = *impl_;
  if (!(t >= 0.0)) raise(Errc::invalid_params, "time must be >= 0");
  double acc = 0.0;
  for (Eigen::Index k = 0; k < im.values.size(); ++k)
    acc += im.vectors(static_cast<Eigen::Index>(x), k) *
           im.vectors(static_cast<Eigen::Index>(y), k) * std::exp(-im.values(k) * t);
  return acc * im.inv_sqrt_theta(x) * im.inv_sqrt_theta(y);
}

SpaceTimeFn MatexpOracle::as_fn() const {
  MatexpOracle copy = *this;
  return [copy](VertexIndex x, VertexIndex y, double t) { return copy.value(x, y, t); };
}

double matexp_oracle(const WeightedGraph& g, VertexIndex x, VertexIndex y, double t) {
  return MatexpOracle(g).value(x, y, t);
}

OracleResult compare_with_oracle(const WeightedGraph& g, const MatexpOracle& oracle,
                                 VertexIndex x, VertexIndex y, double t, double series_tol,
                                 double oracle_tolerance) {
  OracleResult res;
  res.x = x;
  res.y = y;
  res.t = t;
  res.oracle_tolerance = oracle_tolerance;
  res.oracle_value = oracle.value(x, y, t);
  auto est = heat_kernel_dirac(g, x, y, t, series_tol);
  res.engine_value = est.value;
  res.engine_bound = est.total_bound;
  res.pass = std::abs(res.engine_value - res.oracle_value) <= res.engine_bound + oracle_tolerance;
  return res;
}

CtrwResult ctrw_simulate(const WeightedGraph& g, VertexIndex x, double t, std::size_t n_samples,
                         std::uint64_t seed) {
  g.check_index(x);
  if (!(t >= 0.0)) raise(Errc::invalid_params, "time must be >= 0");
  const std::size_t n = g.size();
  // per-vertex cumulative jump weights
  std::vector<std::vector<double>> cumulative(n);
  for (VertexIndex v = 0; v < n; ++v) {
    double acc = 0.0;
    cumulative[v].reserve(g.degree(v));
    for (const auto& nb : g.neighbors(v)) {
      acc += nb.w;
      cumulative[v].push_back(acc);
    }
  }
  CtrwResult out;
  out.samples = n_samples;
  out.seed = seed;
  out.frequency.assign(n, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> exp1(1.0);
  for (std::size_t s = 0; s < n_samples; ++s) {
    VertexIndex state = x;
    double clock = 0.0;
    while (true) {
      double mu = g.strength(state);
      if (mu <= 0.0) break;  // absorbing isolated vertex
      clock += exp1(rng) * g.theta(state) / mu;
      if (clock >= t) break;
      double u = unit(rng) * mu;
      const auto& cum = cumulative[state];
      std::size_t k = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
      if (k >= cum.size()) k = cum.size() - 1;
      state = g.neighbors(state)[k].to;
    }
    out.frequency[state] += 1.0;
  }
  for (double& f : out.frequency) f /= static_cast<double>(n_samples);
  return out;
}

double residual_check(const WeightedGraph& g, const SpaceTimeFn& kernel, VertexIndex x,
                      VertexIndex y, double t, double h) {
  g.check_index(x);
  g.check_index(y);
  if (!(h > 0.0) || !(t - h > 0.0))
    raise(Errc::invalid_params, "residual check needs 0 < h < t");
  std::vector<double> f(g.size());
  for (VertexIndex z = 0; z < g.size(); ++z) f[z] = kernel(z, y, t);
  double lap = g.apply_laplacian(f, x);
  double dt = (kernel(x, y, t + h) - kernel(x, y, t - h)) / (2.0 * h);
  return std::abs(lap + dt);
}

namespace {

std::vector<VertexIndex> sample_vertices(const WeightedGraph& g, std::size_t count,
                                         std::mt19937_64& rng) {
  std::vector<VertexIndex> all(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) all[v] = v;
  if (all.size() <= count) return all;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

class SuiteRunner {
 public:
  SuiteRunner(const WeightedGraph& g, const SuiteConfig& cfg) : g_(g), cfg_(cfg), rng_(cfg.seed) {}

  SuiteReport run() {
    auto enabled = [&](const std::string& name) {
      return cfg_.checks.empty() ||
             std::find(cfg_.checks.begin(), cfg_.checks.end(), name) != cfg_.checks.end();
    };
    if (enabled("mass")) check_mass();
    if (enabled("symmetry")) check_symmetry();
    if (enabled("positivity")) check_positivity();
    if (enabled("semigroup")) check_semigroup();
    if (enabled("heat_equation")) check_heat_equation();
    if (enabled("small_time")) check_small_time();
    if (enabled("matexp")) check_matexp();
    if (enabled("parametrix_independence")) check_parametrix_independence();
    if (enabled("ctrw")) check_ctrw();
    for (const auto& c : report_.checks)
      if (!c.statistical && !c.pass) report_.deterministic_pass = false;
    return report_;
  }

 private:
  std::vector<double> engine_row(VertexIndex x, double t, KernelEstimate* info = nullptr) {
    return heat_kernel_dirac_row(g_, x, t, cfg_.series_tol, info, cfg_.series_order_override);
  }

  // A forced series order is the caller asserting the truncation is fine, so
  // checks run against the fixed tolerances instead of the (honest, large)
  // reported truncation bound.
  double usable_bound(const KernelEstimate& info) const {
    return cfg_.series_order_override ? 0.0 : info.total_bound;
  }

  void push(CheckResult r) { report_.checks.push_back(std::move(r)); }

  void check_mass() {
    CheckResult r{"mass", 0, -1.0, 1e-12, true, false, {}};
    for (double t : cfg_.times) {
      for (VertexIndex x : sample_vertices(g_, 4, rng_)) {
        auto row = engine_row(x, t);
        double mass = 0.0;
        for (VertexIndex y = 0; y < g_.size(); ++y) mass += g_.theta(y) * row[y];
        r.worst_margin = std::max(r.worst_margin, std::abs(mass - 1.0) - r.tolerance);
        ++r.queries;
      }
    }
    r.pass = r.worst_margin <= 0.0;
    push(r);
  }

  void check_symmetry() {
    CheckResult r{"symmetry", 0, -1.0, cfg_.tolerance, true, false, {}};
    for (double t : cfg_.times) {
      KernelEstimate info;
      auto xs = sample_vertices(g_, 4, rng_);
      for (VertexIndex x : xs) {
        auto row_x = engine_row(x, t, &info);
        for (VertexIndex y : xs) {
          if (y <= x) continue;
          auto row_y = engine_row(y, t);
          double allowed = 2.0 * usable_bound(info) + r.tolerance;
          r.worst_margin = std::max(r.worst_margin, std::abs(row_x[y] - row_y[x]) - allowed);
          ++r.queries;
        }
      }
    }
    r.pass = r.worst_margin <= 0.0;
    push(r);
  }

  void check_positivity() {
    CheckResult r{"positivity", 0, -1.0, cfg_.tolerance, true, false, {}};
    for (double t : cfg_.times) {
      KernelEstimate info;
      for (VertexIndex x : sample_vertices(g_, 4, rng_)) {
        auto row = engine_row(x, t, &info);
        for (VertexIndex y = 0; y < g_.size(); ++y) {
          r.worst_margin =
              std::max(r.worst_margin, -(row[y] + usable_bound(info) + r.tolerance));
          ++r.queries;
        }
      }
    }
    r.pass = r.worst_margin <= 0.0;
    push(r);
  }

  void check_semigroup() {
    CheckResult r{"semigroup", 0, -1.0, cfg_.tolerance, true, false, {}};
    for (double t : cfg_.times) {
      double s = t / 2.0;
      for (VertexIndex x : sample_vertices(g_, 3, rng_)) {
        auto row_s = engine_row(x, s);
        auto row_t = engine_row(x, t);
        for (VertexIndex y : sample_vertices(g_, 3, rng_)) {
          double acc = 0.0;
          auto row_y = engine_row(y, s);  // H(z,y;s) = H(y,z;s)
          for (VertexIndex z = 0; z < g_.size(); ++z)
            acc += row_s[z] * row_y[z] * g_.theta(z);
          r.worst_margin = std::max(r.worst_margin, std::abs(acc - row_t[y]) - r.tolerance);
          ++r.queries;
        }
      }
    }
    r.pass = r.worst_margin <= 0.0;
    push(r);
  }

  void check_heat_equation() {
    CheckResult r{"heat_equation", 0, -1.0, 0.3, true, false, {}};
    SpaceTimeFn kernel = [this](VertexIndex a, VertexIndex b, double tt) {
      return heat_kernel_dirac(g_, a, b, tt, cfg_.series_tol, cfg_.series_order_override).value;
    };
    double t = cfg_.times.empty() ? 0.5 : cfg_.times.back();
    KernelEstimate info;
    for (VertexIndex x : sample_vertices(g_, 2, rng_)) {
      engine_row(x, t, &info);
      for (VertexIndex y : sample_vertices(g_, 2, rng_)) {
        double h1 = 0.02 * t, h2 = 0.01 * t;
        double res1 = residual_check(g_, kernel, x, y, t, h1);
        double res2 = residual_check(g_, kernel, x, y, t, h2);
        double floor = 100.0 * usable_bound(info) / h2 + 1e-13;
        ++r.queries;
        if (res2 <= floor) continue;  // truncation floor reached
        double ratio = res1 / res2;
        // centered difference is O(h^2): halving h divides the residual by ~4
        r.worst_margin = std::max(r.worst_margin, std::abs(ratio - 4.0) - 4.0 * r.tolerance);
      }
    }
    r.pass = r.worst_margin <= 0.0;
    push(r);
  }

  void check_small_time() {
    CheckResult r{"small_time", 0, -1.0, 0.0, true, false, {}};
    VertexIndex x = 0;
    if (g_.degree(x) == 0 || g_.size() < 2) {
      push(r);
      return;
    }
    VertexIndex y = g_.neighbors(x)[0].to;
    double dev2 = deviation_from_leading(x, y, 1e-2);
    double dev3 = deviation_from_leading(x, y, 1e-3);
    r.queries = 2;
    if (dev2 > 1e-14) {
      double ratio = dev3 / dev2;
      // |H/lead - 1| ~ K t, so a decade in t shrinks the deviation ~10x
      r.worst_margin = std::max(0.05 - ratio, ratio - 0.2);
    }
    r.pass = r.worst_margin <= 0.0;
    push(r);
  }

  double deviation_from_leading(VertexIndex x, VertexIndex y, double t) {
    auto lead = small_time_leading_term(g_, x, y, t);
    double value = heat_kernel_dirac(g_, x, y, t, cfg_.series_tol).value;
    if (lead.value == 0.0) return 0.0;
    return std::abs(value / lead.value - 1.0);
  }

  void check_matexp() {
    CheckResult r{"matexp", 0, -1.0, 1e-10, true, false, {}};
    MatexpOracle oracle(g_);
    for (double t : cfg_.times) {
      KernelEstimate info;
      for (VertexIndex x : sample_vertices(g_, cfg_.max_pairs, rng_)) {
        auto row = engine_row(x, t, &info);
        for (VertexIndex y : sample_vertices(g_, cfg_.max_pairs, rng_)) {
          double diff = std::abs(row[y] - oracle.value(x, y, t));
          r.worst_margin = std::max(r.worst_margin, diff - (usable_bound(info) + r.tolerance));
          ++r.queries;
        }
      }
    }
    r.pass = r.worst_margin <= 0.0;
    push(r);
  }

  void check_parametrix_independence() {
    CheckResult r{"parametrix_independence", 0, -1.0, 1e-4, true, false, {}};
    auto metric = combinatorial_metric(g_);
    auto gaussian = gaussian_parametrix(g_, metric);
    GeneralOptions opts;
    opts.tol = 2e-5;
    double t = cfg_.times.empty() ? 0.5 : cfg_.times.front();
    KernelEstimate dirac_info;
    auto xs = sample_vertices(g_, 2, rng_);
    for (VertexIndex x : xs) {
      auto row = engine_row(x, t, &dirac_info);
      for (VertexIndex y : xs) {
        auto est = heat_kernel_general(g_, gaussian, x, y, t, opts);
        double allowed = est.total_bound + usable_bound(dirac_info) + r.tolerance;
        r.worst_margin = std::max(r.worst_margin, std::abs(est.value - row[y]) - allowed);
        ++r.queries;
      }
    }
    r.pass = r.worst_margin <= 0.0;
    push(r);
  }

  void check_ctrw() {
    CheckResult r{"ctrw", 0, -1.0, 0.0, true, true, cfg_.seed};
    double t = cfg_.times.empty() ? 0.5 : cfg_.times.front();
    VertexIndex x = 0;
    auto walk = ctrw_simulate(g_, x, t, cfg_.ctrw_samples, cfg_.seed);
    auto row = engine_row(x, t);
    for (VertexIndex y = 0; y < g_.size(); ++y) {
      double p = row[y] * g_.theta(y);
      double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / walk.samples);
      r.worst_margin = std::max(r.worst_margin, std::abs(walk.frequency[y] - p) - 3.0 * se);
      ++r.queries;
    }
    r.pass = r.worst_margin <= 0.0;
    push(r);
  }

  const WeightedGraph& g_;
  const SuiteConfig& cfg_;
  std::mt19937_64 rng_;
  SuiteReport report_;
};

}  // namespace

SuiteReport suite_run(const WeightedGraph& g, const SuiteConfig& config) {
  return SuiteRunner(g, config).run();
}

std::string SuiteReport::to_json() const {
  std::ostringstream out;
  out.precision(17);
  out << "{\"deterministic_pass\": " << (deterministic_pass ? "true" : "false")
      << ", \"checks\": [";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    if (i) out << ", ";
    out << "{\"name\": \"" << c.name << "\", \"queries\": " << c.queries
        << ", \"worst_margin\": " << c.worst_margin << ", \"tolerance\": " << c.tolerance
        << ", \"pass\": " << (c.pass ? "true" : "false")
        << ", \"statistical\": " << (c.statistical ? "true" : "false");
    if (c.seed) out << ", \"seed\": " << *c.seed;
    out << "}";
  }
  out << "]}";
  return out.str();
}

}  // namespace graphheat
