// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the observed worst margins.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "graphheat/closed_forms.hpp"
#include "graphheat/engine.hpp"
#include "graphheat/generators.hpp"
#include "graphheat/metrics.hpp"
#include "graphheat/parametrix.hpp"
#include "graphheat/validation.hpp"

using namespace graphheat;

namespace {

void report(int criterion, bool pass, const char* detail) {
  std::printf("[criterion %2d] %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail);
  std::fflush(stdout);
}

double loglog_slope(const std::vector<double>& ts, const std::vector<double>& vs) {
  double mx = 0, my = 0;
  const std::size_t n = ts.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::log(ts[i]);
    ys[i] = std::log(std::abs(vs[i]));
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

}  // namespace

TEST_CASE("criterion 1: lattice closed form") {
  auto start = std::chrono::steady_clock::now();
  auto z = gen::lattice_window(80);
  auto x = z.at("0");
  double worst = 0.0;
  for (double t : {0.25, 1.0, 2.0}) {
    auto row = heat_kernel_dirac_row(z, x, t, 1e-12);
    for (int j = 0; j <= 5; ++j) {
      double ref = lattice_kernel(j, t);
      worst = std::max(worst, std::abs(row[z.at(std::to_string(j))] - ref) / ref);
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool pass = worst <= 1e-8 && secs <= 30.0;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "Z window radius 80, |x-y|<=5, t in {0.25,1,2}: worst rel %.2e (<=1e-8), %.1fs",
                worst, secs);
  report(1, pass, detail);
  CHECK(worst <= 1e-8);
  CHECK(secs <= 30.0);
}

TEST_CASE("criterion 2: tree closed form") {
  double worst_rel = 0.0, worst_walk = 0.0;
  for (int q : {2, 3}) {
    auto radial = gen::tree_radial_window(q, 40);  // radius-40 ball, radial model
    auto root = radial.at(radial.id(0));
    for (double t : {0.25, 1.0}) {
      auto row = heat_kernel_dirac_row(radial, root, t, 1e-12);
      for (int r = 0; r <= 4; ++r) {
        double ref = tree_kernel(q, r, t, 1e-12).value;
        double walk = tree_kernel_walk_series(q, r, t, 1e-13);
        worst_rel = std::max(worst_rel, std::abs(row[r] - ref) / std::abs(ref));
        worst_walk = std::max(worst_walk, std::abs(ref - walk));
      }
    }
  }
  // the generic engine on a literal (explicitly stored) tree ball
  auto ball = gen::tree_ball(2, 14);
  auto r0 = ball.at("r");
  auto row = heat_kernel_dirac_row(ball, r0, 0.25, 1e-12);
  double worst_ball = 0.0;
  VertexIndex probe = r0;
  for (int r = 0; r <= 4; ++r) {
    worst_ball = std::max(worst_ball,
                          std::abs(row[probe] - tree_kernel(2, r, 0.25, 1e-13).value));
    if (r < 4) probe = ball.at("r" + std::string(r + 1, '0'));
  }
  bool pass = worst_rel <= 1e-8 && worst_walk <= 1e-10 && worst_ball <= 1e-7;
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "q in {2,3}, radius-40 radial models: worst rel %.2e (<=1e-8); "
                "bessel-vs-walk %.2e (<=1e-10); explicit ball %.2e (<=1e-7)",
                worst_rel, worst_walk, worst_ball);
  report(2, pass, detail);
  CHECK(worst_rel <= 1e-8);
  CHECK(worst_walk <= 1e-10);
  CHECK(worst_ball <= 1e-7);
}

TEST_CASE("criterion 3: exact mass conservation") {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto g = gen::random_bounded_degree(200, 6, {0.75, 1.5}, {0.25, 1.0}, seed);
    for (double t : {0.1, 1.0}) {
      for (VertexIndex x : {0ul, 77ul, 199ul}) {
        auto row = heat_kernel_dirac_row(g, x, t, 1e-12);
        long double mass = 0.0L;
        for (VertexIndex y = 0; y < g.size(); ++y) mass += g.theta(y) * row[y];
        worst = std::max(worst, std::abs(static_cast<double>(mass - 1.0L)));
      }
      // partial sums conserve mass at every order, not only the chosen one
      for (int order : {1, 2, 6}) {
        auto row = heat_kernel_dirac_row(g, 3, t, 1e-12, nullptr, order);
        long double mass = 0.0L;
        for (VertexIndex y = 0; y < g.size(); ++y) mass += g.theta(y) * row[y];
        worst = std::max(worst, std::abs(static_cast<double>(mass - 1.0L)));
      }
    }
  }
  bool pass = worst <= 1e-12;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "20 seeds, n=200, N=6, non-constant theta, t in {0.1,1}: worst |mass-1| %.2e "
                "(<=1e-12)",
                worst);
  report(3, pass, detail);
  CHECK(worst <= 1e-12);
}

TEST_CASE("criterion 4: oracle equivalence on all pairs") {
  auto g = gen::random_bounded_degree(200, 6, {0.75, 1.5}, {0.25, 1.0}, 42);
  MatexpOracle oracle(g);
  double worst = -1.0;
  for (double t : {0.1, 0.5, 1.0}) {
    KernelEstimate info;
    for (VertexIndex x = 0; x < g.size(); ++x) {
      auto row = heat_kernel_dirac_row(g, x, t, 1e-12, &info);
      for (VertexIndex y = 0; y < g.size(); ++y) {
        double diff = std::abs(row[y] - oracle.value(x, y, t));
        worst = std::max(worst, diff - (info.total_bound + 1e-10));
      }
    }
  }
  bool pass = worst <= 0.0;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "200-vertex graph, all pairs, t in {0.1,0.5,1}: worst margin over "
                "total_bound+1e-10 is %.2e (<=0)",
                worst);
  report(4, pass, detail);
  CHECK(worst <= 0.0);
}

TEST_CASE("criterion 5: parametrix independence") {
  double worst_abs = 0.0, worst_margin = -1.0;
  GeneralOptions opts;
  opts.tol = 2e-5;
  opts.max_intervals = 2048;

  auto ball = gen::tree_ball(2, 8);
  auto metric_ball = combinatorial_metric(ball);
  auto gauss_ball = gaussian_parametrix(ball, metric_ball);
  auto root = ball.at("r");
  std::vector<std::pair<VertexIndex, VertexIndex>> ball_pairs{{root, root},
                                                              {ball.at("r00"), root}};
  for (double t : {0.25, 1.0}) {
    for (auto [x, y] : ball_pairs) {
      auto est = heat_kernel_general(ball, gauss_ball, x, y, t, opts);
      auto ref = heat_kernel_dirac(ball, x, y, t, 1e-12);
      double diff = std::abs(est.value - ref.value);
      worst_abs = std::max(worst_abs, diff);
      worst_margin = std::max(worst_margin, diff - (est.total_bound + ref.total_bound));
    }
  }

  auto rg = gen::random_bounded_degree(50, 5, {0.75, 1.5}, {0.25, 1.0}, 7);
  auto gauss_rg = gaussian_parametrix(rg, combinatorial_metric(rg));
  std::vector<std::pair<VertexIndex, VertexIndex>> rg_pairs{{0, 0}, {0, 11}, {23, 4}};
  for (double t : {0.25, 1.0}) {
    for (auto [x, y] : rg_pairs) {
      auto est = heat_kernel_general(rg, gauss_rg, x, y, t, opts);
      auto ref = heat_kernel_dirac(rg, x, y, t, 1e-12);
      double diff = std::abs(est.value - ref.value);
      worst_abs = std::max(worst_abs, diff);
      worst_margin = std::max(worst_margin, diff - (est.total_bound + ref.total_bound));
    }
  }
  bool pass = worst_abs <= 1e-4 && worst_margin <= 0.0;
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "tree ball (q=2,r=8) + random-50, t in {0.25,1}: worst |gauss-dirac| %.2e "
                "(<=1e-4), worst bound margin %.2e (<=0)",
                worst_abs, worst_margin);
  report(5, pass, detail);
  CHECK(worst_abs <= 1e-4);
  CHECK(worst_margin <= 0.0);
}

TEST_CASE("criterion 6: small-time asymptotics") {
  const std::vector<double> ts{1e-1, 1e-2, 1e-3};
  double worst_low = 1.0, worst_high = 0.0;
  auto run_family = [&](const WeightedGraph& g, VertexIndex x,
                        const std::vector<VertexIndex>& targets) {
    for (VertexIndex y : targets) {
      std::vector<double> devs;
      for (double t : ts) {
        auto lead = small_time_leading_term(g, x, y, t);
        double value = heat_kernel_dirac(g, x, y, t, 1e-15).value;
        devs.push_back(std::abs(value / lead.value - 1.0));
      }
      for (std::size_t i = 1; i < devs.size(); ++i) {
        double ratio = devs[i] / devs[i - 1];
        worst_low = std::min(worst_low, ratio);
        worst_high = std::max(worst_high, ratio);
      }
    }
  };
  auto z = gen::lattice_window(80);
  run_family(z, z.at("0"), {z.at("1"), z.at("2"), z.at("3")});
  auto tr = gen::tree_radial_window(2, 40);
  run_family(tr, tr.at(tr.id(0)), {1, 2, 3});
  bool pass = worst_low >= 0.08 && worst_high <= 0.12;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "Z and q=2 tree, r in {1,2,3}: deviation ratios in [%.4f, %.4f] (within "
                "[0.08, 0.12])",
                worst_low, worst_high);
  report(6, pass, detail);
  CHECK(worst_low >= 0.08);
  CHECK(worst_high <= 0.12);
}

TEST_CASE("criterion 7: heat-equation residual decay") {
  struct Query {
    const WeightedGraph* g;
    VertexIndex x, y;
  };
  auto z = gen::lattice_window(40);
  auto tr = gen::tree_radial_window(2, 30);
  auto rg = gen::random_bounded_degree(50, 5, {0.75, 1.5}, {0.25, 1.0}, 12);
  std::vector<Query> queries{
      {&z, z.at("0"), z.at("0")},  {&z, z.at("0"), z.at("1")},  {&z, z.at("0"), z.at("3")},
      {&z, z.at("2"), z.at("-2")}, {&tr, 0, 0},                 {&tr, 0, 1},
      {&tr, 0, 3},                 {&rg, 0, 0},                 {&rg, 0, 7},
      {&rg, 19, 33}};
  const double t = 1.0;
  int valid_ratios = 0, bad_ratios = 0;
  double worst_low = 4.0, worst_high = 4.0;
  for (const auto& q : queries) {
    KernelEstimate info;
    heat_kernel_dirac_row(*q.g, q.x, t, 1e-12, &info);
    SpaceTimeFn kernel = [&q](VertexIndex a, VertexIndex b, double tt) {
      return heat_kernel_dirac(*q.g, a, b, tt, 1e-12).value;
    };
    double prev = -1.0;
    for (double h = 0.04; h > 1e-5; h /= 2.0) {
      double res = residual_check(*q.g, kernel, q.x, q.y, t, h);
      double floor = 100.0 * info.total_bound / h + 1e-13;
      if (res <= floor) break;  // truncation floor reached
      if (prev > 0.0) {
        double ratio = prev / res;
        ++valid_ratios;
        worst_low = std::min(worst_low, ratio);
        worst_high = std::max(worst_high, ratio);
        if (ratio < 3.2 || ratio > 4.8) ++bad_ratios;
      }
      prev = res;
    }
  }
  bool pass = bad_ratios == 0 && valid_ratios >= 10;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "10 queries: %d halving ratios observed in [%.2f, %.2f] (within [3.2, 4.8]), "
                "%d outside",
                valid_ratios, worst_low, worst_high, bad_ratios);
  report(7, pass, detail);
  CHECK(bad_ratios == 0);
  CHECK(valid_ratios >= 10);
}

TEST_CASE("criterion 8: parametrix contract") {
  auto g = gen::random_bounded_degree(12, 4, {0.75, 1.5}, {0.25, 1.0}, 19);
  auto dirac = dirac_parametrix(g);
  auto gauss = gaussian_parametrix(g, combinatorial_metric(g));
  // initial condition exact
  double worst_init = 0.0;
  for (VertexIndex x = 0; x < g.size(); ++x)
    for (VertexIndex y = 0; y < g.size(); ++y) {
      double expect = (x == y) ? 1.0 / g.theta(x) : 0.0;
      worst_init = std::max(worst_init, std::abs(dirac.value(x, y, 0.0) - expect));
      worst_init = std::max(worst_init, std::abs(gauss.value(x, y, 0.0) - expect));
    }
  // |L H| <= lh_bound(t0) t^k on a sampled grid
  double worst_lh = -1.0;
  for (const auto& p : {dirac, gauss}) {
    double bound = p.lh_bound(1.0);
    for (double t : {1e-3, 0.04, 0.3, 1.0})
      for (VertexIndex x = 0; x < g.size(); ++x)
        for (VertexIndex y = 0; y < g.size(); ++y)
          worst_lh = std::max(worst_lh, std::abs(p.heat_op(x, y, t)) - bound);
  }
  // (H*F)(x,y;t) = O(t^{k+1}): log-log slope over t in [1e-3, 1e-1]
  const std::vector<double> ts{1e-3, 1e-2, 1e-1};
  std::vector<double> dirac_corr, gauss_corr;
  for (double t : ts) {
    dirac_corr.push_back(heat_kernel_dirac(g, 0, 0, t, 1e-15).correction);
    GeneralOptions opts;
    opts.tol = std::max(t * 1e-4, 1e-9);
    opts.max_intervals = 1 << 13;
    gauss_corr.push_back(heat_kernel_general(g, gauss, 0, 0, t, opts).correction);
  }
  double slope_dirac = loglog_slope(ts, dirac_corr);
  double slope_gauss = loglog_slope(ts, gauss_corr);
  bool pass = worst_init == 0.0 && worst_lh <= 1e-12 && slope_dirac >= 0.95 &&
              slope_gauss >= 0.95;
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "init error %.1e (=0); |LH|-bound margin %.2e (<=0); correction slopes "
                "dirac %.3f, gaussian %.3f (>=0.95)",
                worst_init, worst_lh, slope_dirac, slope_gauss);
  report(8, pass, detail);
  CHECK(worst_init == 0.0);
  CHECK(worst_lh <= 1e-12);
  CHECK(slope_dirac >= 0.95);
  CHECK(slope_gauss >= 0.95);
}

TEST_CASE("criterion 9: continuous-time walk statistics (non-gating)") {
  double worst = -1.0;
  auto check_graph = [&](const WeightedGraph& g, VertexIndex x, double t, std::uint64_t seed) {
    auto walk = ctrw_simulate(g, x, t, 1000000, seed);
    auto row = heat_kernel_dirac_row(g, x, t, 1e-12);
    for (VertexIndex y = 0; y < g.size(); ++y) {
      double p = row[y] * g.theta(y);
      double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / walk.samples);
      worst = std::max(worst, std::abs(walk.frequency[y] - p) - 3.0 * se);
    }
  };
  auto two = WeightedGraph::build({{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 1.0}});
  auto z = gen::lattice_window(20);
  for (double t : {0.5, 1.0}) {
    check_graph(two, 0, t, 101 + static_cast<std::uint64_t>(10 * t));
    check_graph(z, z.at("0"), t, 202 + static_cast<std::uint64_t>(10 * t));
  }
  bool pass = worst <= 0.0;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "1e6 walks, 2-vertex graph and Z window, t in {0.5,1}: worst margin over 3 "
                "standard errors %.2e (non-gating)",
                worst);
  report(9, pass, detail);
  WARN(worst <= 0.0);  // reported, never gates the suite
}

TEST_CASE("criterion 10: metric suite on generated families") {
  std::vector<std::pair<const char*, WeightedGraph>> graphs;
  graphs.emplace_back("lattice_window(100)", gen::lattice_window(100));
  graphs.emplace_back("tree_ball(2,5)", gen::tree_ball(2, 5));
  graphs.emplace_back("tree_ball(3,4)", gen::tree_ball(3, 4));
  graphs.emplace_back("tree_radial_window(2,40)", gen::tree_radial_window(2, 40));
  graphs.emplace_back("random(200,6)",
                      gen::random_bounded_degree(200, 6, {0.75, 1.5}, {0.25, 1.0}, 3));
  bool all_pass = true;
  double worst_adapted = 0.0;
  for (auto& [name, g] : graphs) {
    for (auto kind : {MetricKind::combinatorial, MetricKind::normalized, MetricKind::intrinsic,
                      MetricKind::adapted, MetricKind::edge_weighted}) {
      auto metric = make_metric(g, kind);
      bool adaptedness = kind == MetricKind::normalized;
      auto rep = verify_metric(g, metric, adaptedness);
      if (adaptedness) worst_adapted = std::max(worst_adapted, rep.worst_adaptedness);
      INFO(name, " ", metric_kind_name(kind));
      CHECK(rep.pass);
      all_pass = all_pass && rep.pass;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "5 families x 5 metrics (<=500 vertices): symmetry, triangles, lower bounds "
                "clean; worst adaptedness %.6f (<=1)",
                worst_adapted);
  report(10, all_pass && worst_adapted <= 1.0 + 1e-12, detail);
  CHECK(all_pass);
  CHECK(worst_adapted <= 1.0 + 1e-12);
}
