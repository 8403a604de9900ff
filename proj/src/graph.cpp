#include "graphheat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

namespace graphheat {

namespace {

std::vector<std::size_t> sorted_permutation(const std::vector<VertexSpec>& vertices) {
  std::vector<std::size_t> perm(vertices.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return vertices[a].id < vertices[b].id; });
  return perm;
}

}  // namespace

WeightedGraph WeightedGraph::build(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges) {
  WeightedGraph g;
  const auto perm = sorted_permutation(vertices);
  g.ids_.reserve(vertices.size());
  g.theta_.reserve(vertices.size());
  std::unordered_map<std::string, VertexIndex> index;
  index.reserve(vertices.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const VertexSpec& v = vertices[perm[i]];
    if (!std::isfinite(v.theta) || v.theta <= 0.0)
      raise(Errc::non_positive_theta, "theta(" + v.id + ") must be positive and finite");
    if (!index.emplace(v.id, i).second)
      raise(Errc::invalid_params, "duplicate vertex id '" + v.id + "'");
    g.ids_.push_back(v.id);
    g.theta_.push_back(v.theta);
  }
  g.adj_.assign(vertices.size(), {});
  for (const EdgeSpec& e : edges) {
    if (!std::isfinite(e.w) || e.w <= 0.0)
      raise(Errc::non_finite_weight,
            "edge (" + e.u + "," + e.v + ") weight must be positive and finite");
    if (e.u == e.v) raise(Errc::self_loop, "self loop at '" + e.u + "'");
    auto iu = index.find(e.u);
    auto iv = index.find(e.v);
    if (iu == index.end() || iv == index.end())
      raise(Errc::unknown_vertex, "edge endpoint not in vertex list: (" + e.u + "," + e.v + ")");
    g.adj_[iu->second].push_back({iv->second, e.w});
    g.adj_[iv->second].push_back({iu->second, e.w});
  }
  g.mu_.assign(vertices.size(), 0.0);
  for (VertexIndex v = 0; v < g.size(); ++v) {
    auto& row = g.adj_[v];
    std::sort(row.begin(), row.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    for (std::size_t i = 1; i < row.size(); ++i)
      if (row[i].to == row[i - 1].to)
        raise(Errc::duplicate_edge,
              "duplicate edge (" + g.ids_[v] + "," + g.ids_[row[i].to] + ")");
    double mu = 0.0;
    for (const Neighbor& nb : row) mu += nb.w;
    g.mu_[v] = mu;
  }
  return g;
}

std::optional<VertexIndex> WeightedGraph::find(std::string_view id) const noexcept {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<VertexIndex>(it - ids_.begin());
}

VertexIndex WeightedGraph::at(std::string_view id) const {
  auto v = find(id);
  if (!v) raise(Errc::unknown_vertex, "no vertex '" + std::string(id) + "'");
  return *v;
}

double WeightedGraph::edge_weight(VertexIndex u, VertexIndex v) const {
  check_index(u);
  check_index(v);
  const auto& row = adj_[u];
  auto it = std::lower_bound(row.begin(), row.end(), v,
                             [](const Neighbor& nb, VertexIndex key) { return nb.to < key; });
  if (it == row.end() || it->to != v) return 0.0;
  return it->w;
}

double WeightedGraph::laplacian_kernel(VertexIndex x, VertexIndex y) const {
  check_index(x);
  check_index(y);
  if (x == y) return mu_[x] / theta_[x];
  double w = edge_weight(x, y);
  return w > 0.0 ? -w / theta_[x] : 0.0;
}

double WeightedGraph::apply_laplacian(std::span<const double> f, VertexIndex x) const {
  check_index(x);
  if (f.size() != size())
    raise(Errc::missing_function_value, "function vector has wrong length");
  double acc = mu_[x] * f[x];
  for (const Neighbor& nb : adj_[x]) acc -= nb.w * f[nb.to];
  return acc / theta_[x];
}

double WeightedGraph::apply_laplacian(const std::map<std::string, double>& f,
                                      std::string_view x) const {
  VertexIndex xi = at(x);
  auto fx = f.find(ids_[xi]);
  if (fx == f.end()) raise(Errc::missing_function_value, "f undefined at '" + ids_[xi] + "'");
  double acc = mu_[xi] * fx->second;
  for (const Neighbor& nb : adj_[xi]) {
    auto fy = f.find(ids_[nb.to]);
    if (fy == f.end())
      raise(Errc::missing_function_value, "f undefined at neighbor '" + ids_[nb.to] + "'");
    acc -= nb.w * fy->second;
  }
  return acc / theta_[xi];
}

std::vector<int> WeightedGraph::hop_distances(VertexIndex x, int max_depth) const {
  check_index(x);
  std::vector<int> dist(size(), -1);
  dist[x] = 0;
  std::deque<VertexIndex> queue{x};
  while (!queue.empty()) {
    VertexIndex u = queue.front();
    queue.pop_front();
    if (max_depth >= 0 && dist[u] >= max_depth) continue;
    for (const Neighbor& nb : adj_[u]) {
      if (dist[nb.to] < 0) {
        dist[nb.to] = dist[u] + 1;
        queue.push_back(nb.to);
      }
    }
  }
  return dist;
}

AssumptionReport check_assumptions(const WeightedGraph& g, std::optional<double> claimed_m,
                                   std::optional<double> claimed_eta,
                                   std::optional<std::size_t> claimed_degree_bound) {
  AssumptionReport rep;
  rep.claimed_m = claimed_m;
  rep.claimed_eta = claimed_eta;
  rep.claimed_degree_bound = claimed_degree_bound;
  rep.theta_min = std::numeric_limits<double>::infinity();
  for (VertexIndex v = 0; v < g.size(); ++v) {
    rep.laplacian_bound = std::max(rep.laplacian_bound, g.strength(v) / g.theta(v));
    rep.theta_min = std::min(rep.theta_min, g.theta(v));
    rep.max_degree = std::max(rep.max_degree, g.degree(v));
  }
  if (g.size() == 0) rep.theta_min = 0.0;
  if (claimed_m) rep.g1_ok = rep.laplacian_bound <= *claimed_m;
  if (claimed_eta) rep.g2_ok = rep.theta_min > *claimed_eta;
  if (claimed_degree_bound) rep.g3_ok = rep.max_degree <= *claimed_degree_bound;
  rep.exploration_radius = g.window_radius();
  return rep;
}

WeightedGraph materialize_ball_impl(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges,
                                    std::vector<double> true_mu, std::vector<bool> complete,
                                    const std::string& center, int radius) {
  WeightedGraph g = WeightedGraph::build(std::move(vertices), std::move(edges));
  // build() sorted the vertices; carry the per-id metadata across.
  g.window_radius_ = radius;
  g.window_center_ = g.at(center);
  g.row_complete_.assign(g.size(), true);
  for (VertexIndex v = 0; v < g.size(); ++v) {
    g.mu_[v] = true_mu[v];
    g.row_complete_[v] = complete[v];
  }
  return g;
}

WeightedGraph materialize_ball(const GraphSource& source, const std::string& center, int radius) {
  if (radius < 0) raise(Errc::invalid_params, "ball radius must be >= 0");
  std::unordered_map<std::string, int> depth;
  std::deque<std::string> queue{center};
  depth[center] = 0;
  std::vector<std::string> order{center};
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    int du = depth[u];
    if (du >= radius) continue;
    for (const auto& [v, w] : source.neighbors(u)) {
      (void)w;
      if (depth.emplace(v, du + 1).second) {
        order.push_back(v);
        queue.push_back(v);
      }
    }
  }
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
  vertices.reserve(order.size());
  std::vector<std::pair<double, bool>> meta;  // (true mu, row complete) in order
  meta.reserve(order.size());
  for (const std::string& u : order) {
    vertices.push_back({u, source.theta(u)});
    double mu = 0.0;
    bool complete = true;
    for (const auto& [v, w] : source.neighbors(u)) {
      mu += w;
      auto it = depth.find(v);
      if (it == depth.end()) {
        complete = false;
        continue;
      }
      if (u < v) edges.push_back({u, v, w});
    }
    meta.emplace_back(mu, complete);
  }
  // reorder metadata to the sorted-id order used by build()
  std::vector<std::string> sorted_ids = order;
  std::sort(sorted_ids.begin(), sorted_ids.end());
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<double> mu_sorted(order.size());
  std::vector<bool> complete_sorted(order.size());
  for (std::size_t i = 0; i < sorted_ids.size(); ++i) {
    const auto& m = meta[pos[sorted_ids[i]]];
    mu_sorted[i] = m.first;
    complete_sorted[i] = m.second;
  }
  return materialize_ball_impl(std::move(vertices), std::move(edges), std::move(mu_sorted),
                               std::move(complete_sorted), center, radius);
}

const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::non_positive_theta: return "NonPositiveTheta";
    case Errc::self_loop: return "SelfLoop";
    case Errc::duplicate_edge: return "DuplicateEdge";
    case Errc::non_finite_weight: return "NonFiniteWeight";
    case Errc::unknown_vertex: return "UnknownVertex";
    case Errc::missing_function_value: return "MissingFunctionValue";
    case Errc::region_too_small: return "RegionTooSmall";
    case Errc::window_too_small: return "WindowTooSmall";
    case Errc::grid_mismatch: return "GridMismatch";
    case Errc::ball_mismatch: return "BallMismatch";
    case Errc::quadrature_not_converged: return "QuadratureNotConverged";
    case Errc::metric_lower_bound_missing: return "MetricLowerBoundMissing";
    case Errc::assumption_violated: return "AssumptionViolated";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::no_closed_form: return "NoClosedFormForGraph";
    case Errc::config_error: return "ConfigError";
  }
  return "Error";
}

}  // namespace graphheat
