#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "graphheat/graph.hpp"

namespace graphheat {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

enum class MetricKind { combinatorial, normalized, intrinsic, adapted, edge_weighted, custom };

const char* metric_kind_name(MetricKind k) noexcept;

/// Distance oracle on a finite region with a certified uniform lower bound
/// over distinct pairs. Built-in kinds precompute all-pairs distances via
/// deterministic shortest-path searches; delta_lower is certified as the
/// minimum single-edge cost (any path between distinct vertices contains at
/// least one edge). Oracles are pure and safe for concurrent reads.
class Metric {
 public:
  double dist(VertexIndex x, VertexIndex y) const {
    if (fn_) return fn_(x, y);
    return (*matrix_)[x * n_ + y];
  }

  MetricKind kind() const noexcept { return kind_; }
  double delta_lower() const noexcept { return delta_lower_; }
  /// A = max mu/theta used by the normalized metric (0 for other kinds).
  double laplacian_bound() const noexcept { return laplacian_bound_; }
  double min_edge_cost() const noexcept { return min_edge_cost_; }
  bool e1_violated() const noexcept { return e1_violated_; }
  /// Shortest-path values are exact infima over all (possibly
  /// region-leaving) paths when the candidate value is < hop_radius *
  /// min_edge_cost; true unconditionally on complete graphs.
  bool exact_in_region() const noexcept { return exact_in_region_; }

 private:
  friend Metric make_search_metric(const WeightedGraph&, MetricKind, double);
  friend Metric custom_metric(std::function<double(VertexIndex, VertexIndex)>, double);

  MetricKind kind_ = MetricKind::custom;
  std::size_t n_ = 0;
  std::shared_ptr<const std::vector<double>> matrix_;
  std::function<double(VertexIndex, VertexIndex)> fn_;
  double delta_lower_ = 0.0;
  double laplacian_bound_ = 0.0;
  double min_edge_cost_ = 0.0;
  bool e1_violated_ = false;
  bool exact_in_region_ = true;
};

Metric combinatorial_metric(const WeightedGraph& g);
Metric normalized_metric(const WeightedGraph& g, double laplacian_bound);
Metric intrinsic_metric(const WeightedGraph& g);
Metric adapted_metric(const WeightedGraph& g);
Metric edge_weighted_metric(const WeightedGraph& g);
Metric custom_metric(std::function<double(VertexIndex, VertexIndex)> dist, double delta_lower);
Metric make_metric(const WeightedGraph& g, MetricKind kind);

/// Single-pair entry points (breadth-first / Dijkstra searches).
double combinatorial_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y);
double normalized_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y,
                           double laplacian_bound);
double intrinsic_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y);
double adapted_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y);
double edge_weighted_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y);

struct MetricViolation {
  std::string check;  // "symmetry" | "identity" | "triangle" | "lower_bound" | "adaptedness"
  VertexIndex x = 0, y = 0, z = 0;
  double value = 0.0;
  double bound = 0.0;
};

struct MetricReport {
  bool pass = true;
  std::vector<MetricViolation> violations;
  double min_distinct_distance = kUnreachable;
  double max_adjacent_distance = 0.0;  // empirical c over adjacent pairs
  double worst_adaptedness = 0.0;      // max over x of (1/theta) sum d^2 w
  std::string to_json() const;
};

/// Checks symmetry, identity of indiscernibles, the triangle inequality on
/// all triples, the uniform lower bound, and (optionally) the adaptedness
/// inequality (1/theta(x)) sum_y d^2(x,y) w_{xy} <= 1 at every vertex.
MetricReport verify_metric(const WeightedGraph& g, const Metric& m,
                           bool check_adaptedness = false, std::size_t max_violations = 32);

struct BallVolumeReport {
  VertexIndex center = 0;
  std::vector<double> radii;
  std::vector<double> volumes;           // V_d(x,r) = sum_{d(x,y)<r} theta(y)
  std::vector<double> doubling_ratios;   // V(x,2r)/V(x,r)
  double doubling_constant = 0.0;        // max ratio observed
};

BallVolumeReport ball_volume(const WeightedGraph& g, const Metric& m, VertexIndex center,
                             std::vector<double> radii);

}  // namespace graphheat
