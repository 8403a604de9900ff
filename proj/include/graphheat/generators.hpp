#pragma once

#include <cstdint>
#include <utility>

#include "graphheat/graph.hpp"

namespace graphheat::gen {

/// Integer-line window {-radius, ..., radius} with theta == 1 and unit edges.
WeightedGraph lattice_window(int radius);

/// Explicit ball of the (q+1)-regular tree, theta == 1, unit edges.
/// Root id "r"; children append a digit per level. Guarded against
/// exponential blowups (vertex count capped).
WeightedGraph tree_ball(int q, int radius);

/// Distance quotient of the (q+1)-regular tree around its root: the
/// weighted path on shells 0..radius with theta(0)=1, theta(d)=(q+1)q^{d-1},
/// w(0,1)=q+1, w(d,d+1)=(q+1)q^d. Heat-kernel values between the root and
/// shell r equal the tree's values between vertices at distance r, order by
/// order in the chain expansion, so radius-R models stand in for radius-R
/// balls that are too large to store.
WeightedGraph tree_radial_window(int q, int radius);

/// Connected random graph: a degree-capped random spanning tree plus extra
/// edges, max degree <= max_degree, theta and w drawn uniformly from the
/// given ranges. Deterministic in the seed.
WeightedGraph random_bounded_degree(std::size_t n, std::size_t max_degree,
                                    std::pair<double, double> theta_range,
                                    std::pair<double, double> w_range, std::uint64_t seed);

/// Intensional integer line (infinite); ids are decimal integers.
class LatticeSource : public GraphSource {
 public:
  double theta(const std::string& id) const override;
  std::vector<std::pair<std::string, double>> neighbors(const std::string& id) const override;
};

/// Intensional (q+1)-regular tree (infinite); ids as in tree_ball.
class TreeSource : public GraphSource {
 public:
  explicit TreeSource(int q);
  double theta(const std::string& id) const override;
  std::vector<std::pair<std::string, double>> neighbors(const std::string& id) const override;

 private:
  int q_;
};

}  // namespace graphheat::gen
