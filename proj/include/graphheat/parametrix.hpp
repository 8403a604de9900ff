#pragma once

#include <functional>

#include "graphheat/graph.hpp"
#include "graphheat/metrics.hpp"

namespace graphheat {

/// Approximate heat kernel H(x,y;t) of declared order k:
///   - value(x,y,0) = delta_{x=y}/theta(x),
///   - heat_op = (Delta_x + d/dt) H extends continuously to t = 0,
///   - |heat_op(x,y,t)| <= lh_bound(t0) * t^order on (0, t0].
/// All oracles are pure; evaluation at distinct arguments may run
/// concurrently.
struct Parametrix {
  int order = 0;
  std::size_t n = 0;  // vertex count of the graph it was built on

  std::function<double(VertexIndex, VertexIndex, double)> value;
  std::function<double(VertexIndex, VertexIndex, double)> heat_op;
  /// (x, t, tail_tol) -> metric radius R with the L1(theta) mass of
  /// value(x,.,t) beyond R certified <= tail_tol.
  std::function<double(VertexIndex, double, double)> support_radius;
  /// C(t0) with |heat_op| <= C(t0) t^order on (0, t0].
  std::function<double(double)> lh_bound;

  /// Optional fast path for the quadrature engine: fill out[z*n+u] =
  /// heat_op(z,u,s) for the whole window at once.
  std::function<void(double, double*)> sample_heat_op;
  /// Optional certified L1(theta) tails beyond a metric radius, used for
  /// spatial truncation bounds on window graphs: (x, t, radius) -> bound.
  std::function<double(VertexIndex, double, double)> value_l1_tail;
  std::function<double(VertexIndex, double, double)> heat_op_l1_tail;
};

/// H(x,y;t) = delta_{x=y}/theta(x): order-0 parametrix on a locally finite
/// graph. heat_op is time-constant and supported on x and its neighbors.
Parametrix dirac_parametrix(const WeightedGraph& g);

/// Dilated Gaussian exp(-theta(x)theta(y)d^2(x,y)/t)/sqrt(theta(x)theta(y))
/// for a metric with certified lower bound delta > 0; order 0.
Parametrix gaussian_parametrix(const WeightedGraph& g, const Metric& metric);

/// Sum over chains z_1..z_{ell-1} of delta_x(z_1) delta_{z_1}(z_2) ...
/// delta_{z_{ell-1}}(y), i.e. the (x,y) entry of the ell-th power of the
/// Laplacian kernel, computed by repeated sparse application.
double chain_coefficient(const WeightedGraph& g, VertexIndex x, VertexIndex y, int ell);

}  // namespace graphheat
