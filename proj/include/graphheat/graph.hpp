#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphheat/errors.hpp"

namespace graphheat {

using VertexIndex = std::size_t;

struct VertexSpec {
  std::string id;
  double theta;
};

struct EdgeSpec {
  std::string u;
  std::string v;
  double w;
};

/// Immutable vertex- and edge-weighted undirected graph.
///
/// Vertices are stored sorted by id and adjacency lists sorted by neighbor
/// index, so every sum iterates in a fixed order. A graph is either
/// complete (it is the whole graph) or a window materialized from a larger
/// graph; in the latter case each vertex still carries its true strength
/// mu(v), but boundary rows may omit edges that leave the window.
class WeightedGraph {
 public:
  struct Neighbor {
    VertexIndex to;
    double w;
  };

  static WeightedGraph build(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges);

  std::size_t size() const noexcept { return theta_.size(); }
  const std::string& id(VertexIndex v) const { return ids_[v]; }
  std::optional<VertexIndex> find(std::string_view id) const noexcept;
  VertexIndex at(std::string_view id) const;  // throws unknown_vertex

  double theta(VertexIndex v) const { return theta_[v]; }
  /// mu(v): sum of all incident edge weights (true value, even on window
  /// boundaries where some incident edges are not stored).
  double strength(VertexIndex v) const { return mu_[v]; }
  std::span<const Neighbor> neighbors(VertexIndex v) const {
    return {adj_[v].data(), adj_[v].size()};
  }
  std::size_t degree(VertexIndex v) const { return adj_[v].size(); }
  double edge_weight(VertexIndex u, VertexIndex v) const;  // 0 when not adjacent

  bool is_window() const noexcept { return window_radius_.has_value(); }
  /// All incident edges of v are stored.
  bool row_complete(VertexIndex v) const { return row_complete_.empty() || row_complete_[v]; }
  std::optional<int> window_radius() const noexcept { return window_radius_; }
  std::optional<VertexIndex> window_center() const noexcept { return window_center_; }

  /// Pointwise kernel of the Laplacian: mu(x)/theta(x) on the diagonal,
  /// -w_{xy}/theta(x) across an edge, 0 otherwise.
  double laplacian_kernel(VertexIndex x, VertexIndex y) const;

  /// (Delta f)(x) = (1/theta(x)) sum_y (f(x)-f(y)) w_{xy}; f indexed by vertex.
  double apply_laplacian(std::span<const double> f, VertexIndex x) const;
  /// Map-based variant; throws missing_function_value when f lacks x or a
  /// stored neighbor of x.
  double apply_laplacian(const std::map<std::string, double>& f, std::string_view x) const;

  VertexIndex check_index(VertexIndex v) const {
    if (v >= size()) raise(Errc::unknown_vertex, "vertex index out of range");
    return v;
  }

  /// Hop distances from x to every vertex (-1 when unreachable), capped at
  /// max_depth when given.
  std::vector<int> hop_distances(VertexIndex x, int max_depth = -1) const;

 private:
  friend WeightedGraph materialize_ball_impl(std::vector<VertexSpec>, std::vector<EdgeSpec>,
                                             std::vector<double>, std::vector<bool>,
                                             const std::string&, int);

  std::vector<std::string> ids_;
  std::vector<double> theta_;
  std::vector<double> mu_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<bool> row_complete_;  // empty means "all complete"
  std::optional<int> window_radius_;
  std::optional<VertexIndex> window_center_;
};

/// Finite-region report on the standing assumptions (bounded Laplacian,
/// vertex weights bounded below, bounded degree). On a window the values
/// are suprema over the stored vertices only; exploration_radius records
/// that scope.
struct AssumptionReport {
  double laplacian_bound = 0.0;  // A = max mu/theta over stored vertices
  double theta_min = 0.0;
  std::size_t max_degree = 0;
  std::optional<double> claimed_m;
  std::optional<double> claimed_eta;
  std::optional<std::size_t> claimed_degree_bound;
  bool g1_ok = true;
  bool g2_ok = true;
  bool g3_ok = true;
  std::optional<int> exploration_radius;
};

AssumptionReport check_assumptions(const WeightedGraph& g, std::optional<double> claimed_m = {},
                                   std::optional<double> claimed_eta = {},
                                   std::optional<std::size_t> claimed_degree_bound = {});

/// Intensional graph: neighborhoods produced on demand, so infinite
/// families are represented without materializing them.
class GraphSource {
 public:
  virtual ~GraphSource() = default;
  virtual double theta(const std::string& id) const = 0;
  virtual std::vector<std::pair<std::string, double>> neighbors(const std::string& id) const = 0;
};

/// Exact ball of the given hop radius around `center`: all vertices within
/// `radius`, all edges among them, true strengths from the source. Rows at
/// depth < radius are complete; rows at depth == radius may not be.
WeightedGraph materialize_ball(const GraphSource& source, const std::string& center, int radius);

}  // namespace graphheat
