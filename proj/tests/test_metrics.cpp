#include <doctest.h>

#include <cmath>

#include "graphheat/generators.hpp"
#include "graphheat/metrics.hpp"

using namespace graphheat;

namespace {

WeightedGraph grid3x3() {
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
  auto id = [](int i, int j) { return std::to_string(i) + std::to_string(j); };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) vertices.push_back({id(i, j), 1.0});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i + 1 < 3) edges.push_back({id(i, j), id(i + 1, j), 1.0});
      if (j + 1 < 3) edges.push_back({id(i, j), id(i, j + 1), 1.0});
    }
  return WeightedGraph::build(std::move(vertices), std::move(edges));
}

}  // namespace

TEST_CASE("combinatorial distance basics") {
  auto g = grid3x3();
  CHECK(combinatorial_distance(g, g.at("00"), g.at("00")) == 0.0);
  CHECK(combinatorial_distance(g, g.at("00"), g.at("01")) == 1.0);
  CHECK(combinatorial_distance(g, g.at("00"), g.at("22")) == 4.0);

  auto split = WeightedGraph::build({{"a", 1.0}, {"b", 1.0}}, {});
  CHECK(combinatorial_distance(split, 0, 1) == kUnreachable);
}

TEST_CASE("normalized distance scales the combinatorial one") {
  auto z = gen::lattice_window(6);
  CHECK(normalized_distance(z, z.at("0"), z.at("1"), 2.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(normalized_distance(z, z.at("0"), z.at("0"), 2.0) == 0.0);
  CHECK(normalized_distance(z, z.at("0"), z.at("3"), 4.0) == doctest::Approx(1.5));
  auto m = normalized_metric(z, 2.0);
  for (VertexIndex x = 0; x < z.size(); ++x)
    for (VertexIndex y = 0; y < z.size(); ++y)
      CHECK(m.dist(x, y) ==
            doctest::Approx(combinatorial_distance(z, x, y) / std::sqrt(2.0)));
}

TEST_CASE("intrinsic distance edge costs") {
  auto one = WeightedGraph::build({{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 1.0}});
  CHECK(intrinsic_distance(one, 0, 0) == 0.0);
  CHECK(intrinsic_distance(one, 0, 1) == doctest::Approx(1.0));
  auto four = WeightedGraph::build({{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 4.0}});
  CHECK(intrinsic_distance(four, 0, 1) == doctest::Approx(0.5));
}

TEST_CASE("adapted distance edge costs") {
  auto one = WeightedGraph::build({{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 1.0}});
  CHECK(adapted_distance(one, 0, 1) == doctest::Approx(1.0));  // u(e) = 1 at two leaves
  auto z = gen::lattice_window(5);
  // interior edge: mu = 2 on both ends, cost = min(1, sqrt(1/2))
  CHECK(adapted_distance(z, z.at("0"), z.at("1")) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("edge-weighted distance takes the cheaper route") {
  auto g = WeightedGraph::build(
      {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}, {"d", 1.0}},
      {{"a", "b", 1.0}, {"b", "d", 2.0}, {"a", "c", 1.0}, {"c", "d", 1.0}});
  CHECK(edge_weighted_distance(g, g.at("a"), g.at("d")) == doctest::Approx(2.0));
  CHECK(edge_weighted_distance(g, g.at("a"), g.at("a")) == 0.0);
  auto z = gen::lattice_window(7);
  for (VertexIndex x : {0ul, 3ul, 9ul})
    for (VertexIndex y : {1ul, 6ul, 14ul})
      CHECK(edge_weighted_distance(z, x, y) == combinatorial_distance(z, x, y));
}

TEST_CASE("verify_metric passes the built-in metrics") {
  auto g = gen::random_bounded_degree(40, 5, {0.75, 1.5}, {0.25, 1.0}, 21);
  for (auto kind : {MetricKind::combinatorial, MetricKind::normalized, MetricKind::intrinsic,
                    MetricKind::adapted, MetricKind::edge_weighted}) {
    auto m = make_metric(g, kind);
    auto rep = verify_metric(g, m, false);
    INFO(std::string(metric_kind_name(kind)));
    CHECK(rep.pass);
    CHECK(rep.min_distinct_distance >= m.delta_lower());
  }
  auto comb = combinatorial_metric(g);
  CHECK(comb.delta_lower() == 1.0);
}

TEST_CASE("adaptedness of the normalized metric") {
  auto z = gen::lattice_window(8);
  double a = check_assumptions(z).laplacian_bound;
  auto rho = normalized_metric(z, a);
  auto rep = verify_metric(z, rho, true);
  CHECK(rep.pass);
  // (1/theta) sum rho^2 w = mu/(A theta) = 1 at interior vertices
  CHECK(rep.worst_adaptedness == doctest::Approx(1.0));
}

TEST_CASE("verify_metric flags a broken custom metric") {
  auto z = gen::lattice_window(3);
  auto broken = custom_metric(
      [&z](VertexIndex x, VertexIndex y) {
        if ((x == 0 && y == 1) || (x == 1 && y == 0)) return 0.0;  // distinct pair at 0
        return combinatorial_distance(z, x, y);
      },
      1.0);
  auto rep = verify_metric(z, broken, false);
  CHECK_FALSE(rep.pass);
  bool saw_lower_bound = false;
  for (const auto& v : rep.violations)
    if (v.check == "lower_bound" || v.check == "identity") saw_lower_bound = true;
  CHECK(saw_lower_bound);
}

TEST_CASE("intrinsic and adapted distances do not increase when w grows") {
  for (std::uint64_t seed : {1ull, 7ull, 13ull}) {
    auto g = gen::random_bounded_degree(25, 4, {0.75, 1.5}, {0.25, 1.0}, seed);
    std::vector<VertexSpec> vs;
    std::vector<EdgeSpec> es;
    for (VertexIndex v = 0; v < g.size(); ++v) vs.push_back({g.id(v), g.theta(v)});
    for (VertexIndex u = 0; u < g.size(); ++u)
      for (const auto& nb : g.neighbors(u))
        if (u < nb.to) es.push_back({g.id(u), g.id(nb.to), nb.w * 1.7});
    auto bigger = WeightedGraph::build(std::move(vs), std::move(es));
    for (VertexIndex x : {0ul, 5ul}) {
      for (VertexIndex y : {3ul, 11ul, 24ul}) {
        CHECK(intrinsic_distance(bigger, x, y) <= intrinsic_distance(g, x, y) + 1e-12);
        CHECK(adapted_distance(bigger, x, y) <= adapted_distance(g, x, y) + 1e-12);
      }
    }
  }
}

TEST_CASE("ball volumes and doubling ratios") {
  auto z = gen::lattice_window(10);
  auto m = combinatorial_metric(z);
  auto x = z.at("0");
  auto rep = ball_volume(z, m, x, {0.5, 2.5, 4.5});
  CHECK(rep.volumes[0] == doctest::Approx(1.0));  // only the center below delta
  CHECK(rep.volumes[1] == doctest::Approx(5.0));  // distances 0,1,2 on both sides
  CHECK(rep.volumes[2] == doctest::Approx(9.0));
  for (std::size_t i = 1; i < rep.volumes.size(); ++i)
    CHECK(rep.volumes[i] >= rep.volumes[i - 1]);

  // trees: exponential growth means the doubling ratio blows up with r
  auto tb = gen::tree_ball(2, 7);
  auto mt = combinatorial_metric(tb);
  auto rt = ball_volume(tb, mt, tb.at("r"), {1.5, 3.5});
  CHECK(rt.doubling_ratios[1] > rt.doubling_ratios[0]);
  CHECK(rt.doubling_constant > 4.0);
}

TEST_CASE("window metrics report whether infima are certified exact") {
  auto z = gen::lattice_window(6);
  CHECK(combinatorial_metric(z).exact_in_region());  // complete graph

  gen::LatticeSource line;
  // diameter 2R always reaches the exit-cost threshold on the line, so the
  // window cannot certify its extreme pairs
  auto ball = materialize_ball(line, "0", 4);
  CHECK_FALSE(combinatorial_metric(ball).exact_in_region());
}

TEST_CASE("ball volume rejects radii beyond a window") {
  gen::LatticeSource line;
  auto ball = materialize_ball(line, "0", 4);
  auto m = combinatorial_metric(ball);
  CHECK_THROWS_AS(ball_volume(ball, m, ball.at("0"), {3.0}), Error);  // 2r = 6 > 4
  auto ok = ball_volume(ball, m, ball.at("0"), {1.5});
  CHECK(ok.volumes[0] == doctest::Approx(3.0));
}
