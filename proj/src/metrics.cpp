#include "graphheat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <sstream>

namespace graphheat {

namespace {

// Per-edge cost of each built-in metric.
double edge_cost(const WeightedGraph& g, MetricKind kind, VertexIndex u,
                 const WeightedGraph::Neighbor& nb, double laplacian_bound) {
  switch (kind) {
    case MetricKind::combinatorial:
      return 1.0;
    case MetricKind::normalized:
      return 1.0 / std::sqrt(laplacian_bound);
    case MetricKind::intrinsic: {
      double ratio = std::min(g.theta(u), g.theta(nb.to)) / nb.w;
      return std::sqrt(std::min(1.0, ratio));
    }
    case MetricKind::adapted: {
      double ru = g.theta(u) / g.strength(u);
      double rv = g.theta(nb.to) / g.strength(nb.to);
      return std::min(1.0, std::sqrt(std::min(ru, rv)));
    }
    case MetricKind::edge_weighted:
      return nb.w;
    case MetricKind::custom:
      break;
  }
  raise(Errc::invalid_params, "custom metrics have no edge cost");
}

// Deterministic nonnegative-cost shortest paths from `source`; ties broken
// by vertex index so repeated runs expand vertices in the same order.
std::vector<double> dijkstra(const WeightedGraph& g, MetricKind kind, VertexIndex source,
                             double laplacian_bound) {
  std::vector<double> dist(g.size(), kUnreachable);
  using Item = std::pair<double, VertexIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& nb : g.neighbors(u)) {
      double nd = d + edge_cost(g, kind, u, nb, laplacian_bound);
      if (nd < dist[nb.to]) {
        dist[nb.to] = nd;
        heap.push({nd, nb.to});
      }
    }
  }
  return dist;
}

std::vector<double> bfs_distances(const WeightedGraph& g, VertexIndex source) {
  std::vector<double> dist(g.size(), kUnreachable);
  dist[source] = 0.0;
  std::deque<VertexIndex> queue{source};
  while (!queue.empty()) {
    VertexIndex u = queue.front();
    queue.pop_front();
    for (const auto& nb : g.neighbors(u)) {
      if (dist[nb.to] == kUnreachable) {
        dist[nb.to] = dist[u] + 1.0;
        queue.push_back(nb.to);
      }
    }
  }
  return dist;
}

}  // namespace

Metric make_search_metric(const WeightedGraph& g, MetricKind kind, double laplacian_bound) {
  Metric m;
  m.kind_ = kind;
  m.n_ = g.size();
  m.laplacian_bound_ = laplacian_bound;
  auto matrix = std::make_shared<std::vector<double>>();
  matrix->reserve(g.size() * g.size());
  for (VertexIndex s = 0; s < g.size(); ++s) {
    auto row = (kind == MetricKind::combinatorial) ? bfs_distances(g, s)
                                                   : dijkstra(g, kind, s, laplacian_bound);
    matrix->insert(matrix->end(), row.begin(), row.end());
  }
  // both sweep directions bound the same infimum; keeping the smaller makes
  // symmetry exact instead of up to path-summation rounding
  for (VertexIndex a = 0; a < g.size(); ++a)
    for (VertexIndex b = a + 1; b < g.size(); ++b) {
      double lo = std::min((*matrix)[a * g.size() + b], (*matrix)[b * g.size() + a]);
      (*matrix)[a * g.size() + b] = lo;
      (*matrix)[b * g.size() + a] = lo;
    }
  m.matrix_ = matrix;
  double min_cost = kUnreachable;
  double max_finite = 0.0;
  for (VertexIndex u = 0; u < g.size(); ++u)
    for (const auto& nb : g.neighbors(u))
      min_cost = std::min(min_cost, edge_cost(g, kind, u, nb, laplacian_bound));
  for (double d : *matrix)
    if (d != kUnreachable) max_finite = std::max(max_finite, d);
  m.min_edge_cost_ = (min_cost == kUnreachable) ? 0.0 : min_cost;
  m.delta_lower_ = m.min_edge_cost_;
  if (kind == MetricKind::edge_weighted) {
    // (E1): positive uniform lower bound on edge weights within the region.
    m.e1_violated_ = g.size() > 1 && m.min_edge_cost_ <= 0.0;
  }
  (void)max_finite;
  if (g.is_window()) {
    // A path leaving the window must first reach an unstored vertex from
    // both endpoints, which costs at least min_edge_cost times the depth
    // deficit; candidates below that cannot be beaten outside.
    const int radius = *g.window_radius();
    auto depth = g.hop_distances(*g.window_center());
    bool certified = true;
    for (VertexIndex a = 0; a < g.size() && certified; ++a)
      for (VertexIndex b = a + 1; b < g.size(); ++b) {
        double d = (*matrix)[a * g.size() + b];
        if (d == kUnreachable) continue;
        double exit_cost =
            m.min_edge_cost_ * (2.0 * (radius + 1) - depth[a] - depth[b]);
        if (d >= exit_cost) {
          certified = false;
          break;
        }
      }
    m.exact_in_region_ = certified;
  }
  return m;
}

Metric combinatorial_metric(const WeightedGraph& g) {
  return make_search_metric(g, MetricKind::combinatorial, 0.0);
}

Metric normalized_metric(const WeightedGraph& g, double laplacian_bound) {
  if (!(laplacian_bound > 0.0))
    raise(Errc::invalid_params, "normalized metric needs laplacian_bound > 0");
  return make_search_metric(g, MetricKind::normalized, laplacian_bound);
}

Metric intrinsic_metric(const WeightedGraph& g) {
  return make_search_metric(g, MetricKind::intrinsic, 0.0);
}

Metric adapted_metric(const WeightedGraph& g) {
  return make_search_metric(g, MetricKind::adapted, 0.0);
}

Metric edge_weighted_metric(const WeightedGraph& g) {
  return make_search_metric(g, MetricKind::edge_weighted, 0.0);
}

Metric make_metric(const WeightedGraph& g, MetricKind kind) {
  switch (kind) {
    case MetricKind::combinatorial: return combinatorial_metric(g);
    case MetricKind::normalized:
      return normalized_metric(g, check_assumptions(g).laplacian_bound);
    case MetricKind::intrinsic: return intrinsic_metric(g);
    case MetricKind::adapted: return adapted_metric(g);
    case MetricKind::edge_weighted: return edge_weighted_metric(g);
    case MetricKind::custom: break;
  }
  raise(Errc::invalid_params, "cannot build a custom metric by kind");
}

Metric custom_metric(std::function<double(VertexIndex, VertexIndex)> dist, double delta_lower) {
  Metric m;
  m.kind_ = MetricKind::custom;
  m.fn_ = std::move(dist);
  m.delta_lower_ = delta_lower;
  return m;
}

double combinatorial_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y) {
  g.check_index(x);
  g.check_index(y);
  return bfs_distances(g, x)[y];
}

double normalized_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y,
                           double laplacian_bound) {
  if (!(laplacian_bound > 0.0))
    raise(Errc::invalid_params, "normalized distance needs laplacian_bound > 0");
  return combinatorial_distance(g, x, y) / std::sqrt(laplacian_bound);
}

double intrinsic_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y) {
  g.check_index(x);
  g.check_index(y);
  return dijkstra(g, MetricKind::intrinsic, x, 0.0)[y];
}

double adapted_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y) {
  g.check_index(x);
  g.check_index(y);
  return dijkstra(g, MetricKind::adapted, x, 0.0)[y];
}

double edge_weighted_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y) {
  g.check_index(x);
  g.check_index(y);
  return dijkstra(g, MetricKind::edge_weighted, x, 0.0)[y];
}

MetricReport verify_metric(const WeightedGraph& g, const Metric& m, bool check_adaptedness,
                           std::size_t max_violations) {
  MetricReport rep;
  const std::size_t n = g.size();
  auto add = [&](MetricViolation v) {
    rep.pass = false;
    if (rep.violations.size() < max_violations) rep.violations.push_back(std::move(v));
  };
  std::vector<double> d(n * n);
  for (VertexIndex x = 0; x < n; ++x)
    for (VertexIndex y = 0; y < n; ++y) d[x * n + y] = m.dist(x, y);

  for (VertexIndex x = 0; x < n; ++x) {
    if (d[x * n + x] != 0.0) add({"identity", x, x, 0, d[x * n + x], 0.0});
    for (VertexIndex y = x + 1; y < n; ++y) {
      double dxy = d[x * n + y], dyx = d[y * n + x];
      if (dxy != dyx) add({"symmetry", x, y, 0, dxy - dyx, 0.0});
      if (dxy == kUnreachable) continue;
      rep.min_distinct_distance = std::min(rep.min_distinct_distance, dxy);
      if (dxy < m.delta_lower() - 1e-15)
        add({"lower_bound", x, y, 0, dxy, m.delta_lower()});
      if (dxy == 0.0) add({"identity", x, y, 0, 0.0, m.delta_lower()});
    }
  }
  // triangle inequality on all ordered triples (tiny slack for float noise)
  for (VertexIndex x = 0; x < n; ++x)
    for (VertexIndex y = 0; y < n; ++y) {
      if (d[x * n + y] == kUnreachable) continue;
      for (VertexIndex z = 0; z < n; ++z) {
        double lhs = d[x * n + y];
        double rhs = d[x * n + z] + d[z * n + y];
        if (lhs > rhs * (1.0 + 1e-12) + 1e-15) {
          add({"triangle", x, y, z, lhs, rhs});
        }
      }
    }
  for (VertexIndex x = 0; x < n; ++x)
    for (const auto& nb : g.neighbors(x))
      rep.max_adjacent_distance = std::max(rep.max_adjacent_distance, d[x * n + nb.to]);
  if (check_adaptedness) {
    for (VertexIndex x = 0; x < n; ++x) {
      double acc = 0.0;
      for (const auto& nb : g.neighbors(x)) acc += d[x * n + nb.to] * d[x * n + nb.to] * nb.w;
      acc /= g.theta(x);
      rep.worst_adaptedness = std::max(rep.worst_adaptedness, acc);
      if (acc > 1.0 + 1e-12) add({"adaptedness", x, 0, 0, acc, 1.0});
    }
  }
  return rep;
}

std::string MetricReport::to_json() const {
  std::ostringstream out;
  out << "{\"pass\": " << (pass ? "true" : "false") << ", \"min_distinct_distance\": "
      << min_distinct_distance << ", \"max_adjacent_distance\": " << max_adjacent_distance
      << ", \"worst_adaptedness\": " << worst_adaptedness << ", \"violations\": [";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) out << ", ";
    out << "{\"check\": \"" << v.check << "\", \"x\": " << v.x << ", \"y\": " << v.y
        << ", \"z\": " << v.z << ", \"value\": " << v.value << ", \"bound\": " << v.bound << "}";
  }
  out << "]}";
  return out.str();
}

BallVolumeReport ball_volume(const WeightedGraph& g, const Metric& m, VertexIndex center,
                             std::vector<double> radii) {
  g.check_index(center);
  for (double r : radii)
    if (!(r > 0.0)) raise(Errc::invalid_params, "ball radii must be positive");
  std::sort(radii.begin(), radii.end());
  BallVolumeReport rep;
  rep.center = center;
  rep.radii = radii;
  double r_max = radii.empty() ? 0.0 : 2.0 * radii.back();
  if (g.is_window()) {
    // the largest requested ball (and its double) must lie inside the region
    double hop_room = static_cast<double>(*g.window_radius()) * m.min_edge_cost();
    if (m.min_edge_cost() > 0.0 && r_max > hop_room)
      raise(Errc::region_too_small, "ball radius exceeds the materialized region");
  }
  auto volume = [&](double r) {
    double acc = 0.0;
    for (VertexIndex y = 0; y < g.size(); ++y) {
      double d = m.dist(center, y);
      if (d < r) acc += g.theta(y);
    }
    return acc;
  };
  for (double r : radii) {
    rep.volumes.push_back(volume(r));
    double ratio = rep.volumes.back() > 0.0 ? volume(2.0 * r) / rep.volumes.back() : 0.0;
    rep.doubling_ratios.push_back(ratio);
    rep.doubling_constant = std::max(rep.doubling_constant, ratio);
  }
  return rep;
}

const char* metric_kind_name(MetricKind k) noexcept {
  switch (k) {
    case MetricKind::combinatorial: return "combinatorial";
    case MetricKind::normalized: return "normalized";
    case MetricKind::intrinsic: return "intrinsic";
    case MetricKind::adapted: return "adapted";
    case MetricKind::edge_weighted: return "edge_weighted";
    case MetricKind::custom: return "custom";
  }
  return "unknown";
}

}  // namespace graphheat
