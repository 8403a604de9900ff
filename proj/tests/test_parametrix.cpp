#include <doctest.h>

#include <cmath>

#include "graphheat/generators.hpp"
#include "graphheat/metrics.hpp"
#include "graphheat/parametrix.hpp"

using namespace graphheat;

TEST_CASE("dirac parametrix values and heat operator") {
  auto g = WeightedGraph::build({{"a", 2.0}, {"b", 1.0}, {"c", 1.0}},
                                {{"a", "b", 1.0}, {"b", "c", 1.0}});
  auto p = dirac_parametrix(g);
  CHECK(p.order == 0);
  auto a = g.at("a"), b = g.at("b"), c = g.at("c");
  CHECK(p.value(a, a, 5.0) == doctest::Approx(0.5));
  CHECK(p.value(a, a, 0.0) == doctest::Approx(0.5));
  CHECK(p.value(a, b, 3.0) == 0.0);
  CHECK(p.heat_op(a, c, 0.7) == 0.0);  // non-adjacent
  // interior vertex of a unit path: mu/theta^2 = 2
  auto z = gen::lattice_window(4);
  auto pz = dirac_parametrix(z);
  CHECK(pz.heat_op(z.at("0"), z.at("0"), 0.3) == doctest::Approx(2.0));
  // heat_op is time-constant and symmetric under the theta pairing
  CHECK(p.heat_op(a, b, 0.1) == doctest::Approx(p.heat_op(a, b, 2.0)));
  CHECK(p.heat_op(a, b, 0.4) == doctest::Approx(p.heat_op(b, a, 0.4)));
  CHECK(p.heat_op(a, b, 0.4) == doctest::Approx(-1.0 / (g.theta(a) * g.theta(b))));
  CHECK(p.support_radius(a, 1.0, 1e-9) == 1.0);
}

TEST_CASE("dirac heat operator realizes the laplacian of the initial column") {
  auto g = gen::random_bounded_degree(20, 4, {0.75, 1.5}, {0.25, 1.0}, 9);
  auto p = dirac_parametrix(g);
  std::vector<double> column(g.size());
  for (VertexIndex y = 0; y < g.size(); ++y) {
    for (VertexIndex z = 0; z < g.size(); ++z) column[z] = (z == y) ? 1.0 / g.theta(y) : 0.0;
    for (VertexIndex x = 0; x < g.size(); ++x)
      CHECK(p.heat_op(x, y, 0.8) == doctest::Approx(g.apply_laplacian(column, x)));
  }
}

TEST_CASE("dirac lh_bound dominates the heat operator") {
  auto g = gen::random_bounded_degree(30, 5, {0.75, 1.5}, {0.25, 1.0}, 14);
  auto p = dirac_parametrix(g);
  double bound = p.lh_bound(2.0);
  for (VertexIndex x = 0; x < g.size(); ++x)
    for (VertexIndex y = 0; y < g.size(); ++y)
      CHECK(std::abs(p.heat_op(x, y, 1.0)) <= bound * (1.0 + 1e-12));
}

TEST_CASE("gaussian parametrix values") {
  auto z = gen::lattice_window(6);
  auto m = combinatorial_metric(z);
  auto p = gaussian_parametrix(z, m);
  auto x = z.at("0"), y = z.at("1"), far = z.at("4");
  CHECK(p.order == 0);
  CHECK(p.value(x, y, 0.0) == 0.0);
  CHECK(p.value(x, x, 0.7) == doctest::Approx(1.0));  // theta == 1
  CHECK(p.value(x, x, 0.0) == doctest::Approx(1.0));
  CHECK(p.value(x, y, 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(p.value(x, far, 1.0) == doctest::Approx(std::exp(-16.0)));
  // symmetric in the space variables
  CHECK(p.value(x, far, 0.6) == doctest::Approx(p.value(far, x, 0.6)));
}

TEST_CASE("gaussian heat operator is continuous at zero and bounded") {
  auto g = WeightedGraph::build({{"a", 1.2}, {"b", 0.8}, {"c", 1.0}, {"d", 1.4}},
                                {{"a", "b", 0.7}, {"b", "c", 0.5}, {"c", "d", 1.1}, {"a", "d", 0.4}});
  auto m = combinatorial_metric(g);
  auto p = gaussian_parametrix(g, m);
  for (VertexIndex x = 0; x < g.size(); ++x)
    for (VertexIndex y = 0; y < g.size(); ++y) {
      double limit = p.heat_op(x, y, 0.0);
      CHECK(p.heat_op(x, y, 1e-8) == doctest::Approx(limit).epsilon(1e-6));
      CHECK(std::abs(p.heat_op(x, y, 1e-8) - p.heat_op(x, y, 1e-9)) < 1e-6);
    }
  double bound = p.lh_bound(2.0);
  for (double t : {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0})
    for (VertexIndex x = 0; x < g.size(); ++x)
      for (VertexIndex y = 0; y < g.size(); ++y)
        CHECK(std::abs(p.heat_op(x, y, t)) <= bound * (1.0 + 1e-12));
}

TEST_CASE("gaussian heat operator matches a finite-difference time derivative") {
  auto g = gen::random_bounded_degree(12, 4, {0.75, 1.5}, {0.25, 1.0}, 3);
  auto m = combinatorial_metric(g);
  auto p = gaussian_parametrix(g, m);
  double t = 0.6, h = 1e-5;
  std::vector<double> column(g.size());
  for (VertexIndex y : {0ul, 5ul}) {
    for (VertexIndex z = 0; z < g.size(); ++z) column[z] = p.value(z, y, t);
    for (VertexIndex x = 0; x < g.size(); ++x) {
      double dt = (p.value(x, y, t + h) - p.value(x, y, t - h)) / (2.0 * h);
      double expected = g.apply_laplacian(column, x) + dt;
      CHECK(p.heat_op(x, y, t) == doctest::Approx(expected).epsilon(1e-7));
    }
  }
}

TEST_CASE("gaussian support radius certifies its tail") {
  auto z = gen::lattice_window(30);
  auto m = combinatorial_metric(z);
  auto p = gaussian_parametrix(z, m);
  auto x = z.at("0");
  for (double tol : {1e-4, 1e-8, 1e-12}) {
    double radius = p.support_radius(x, 1.0, tol);
    CHECK(p.value_l1_tail(x, 1.0, radius) <= tol);
  }
  CHECK(p.support_radius(x, 1.0, 1e-12) >= p.support_radius(x, 1.0, 1e-4));
  // the L1(theta) mass outside the certified radius really is below the bound
  double radius = p.support_radius(x, 1.0, 1e-6);
  double outside = 0.0;
  for (VertexIndex y = 0; y < z.size(); ++y)
    if (m.dist(x, y) > radius) outside += p.value(x, y, 1.0) * z.theta(y);
  CHECK(outside <= 1e-6);
}

TEST_CASE("gaussian parametrix requires a certified lower bound") {
  auto z = gen::lattice_window(3);
  auto broken = custom_metric(
      [&z](VertexIndex x, VertexIndex y) { return combinatorial_distance(z, x, y); }, 0.0);
  CHECK_THROWS_AS(gaussian_parametrix(z, broken), Error);
}

TEST_CASE("chain coefficients") {
  auto z = gen::lattice_window(10);
  auto x = z.at("0");
  CHECK(chain_coefficient(z, x, z.at("1"), 1) == doctest::Approx(-1.0));
  CHECK(chain_coefficient(z, x, x, 1) == doctest::Approx(2.0));
  CHECK(chain_coefficient(z, x, x, 2) == doctest::Approx(6.0));
  // chains shorter than the distance vanish
  CHECK(chain_coefficient(z, x, z.at("3"), 2) == 0.0);
  CHECK(chain_coefficient(z, x, z.at("5"), 4) == 0.0);
}

TEST_CASE("theta-weighted chain coefficients are symmetric") {
  auto g = gen::random_bounded_degree(25, 5, {0.75, 1.5}, {0.25, 1.0}, 17);
  for (int ell : {1, 2, 3, 5}) {
    for (VertexIndex x : {0ul, 7ul}) {
      for (VertexIndex y : {2ul, 11ul, 24ul}) {
        double lhs = g.theta(x) * chain_coefficient(g, x, y, ell);
        double rhs = g.theta(y) * chain_coefficient(g, y, x, ell);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("chain coefficients demand a complete ball") {
  gen::TreeSource tree(2);
  auto ball = materialize_ball(tree, "r", 3);
  auto r = ball.at("r");
  CHECK_NOTHROW(chain_coefficient(ball, r, r, 3));
  CHECK_THROWS_AS(chain_coefficient(ball, r, r, 5), Error);
}
