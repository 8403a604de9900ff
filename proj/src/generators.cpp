#include "graphheat/generators.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace graphheat::gen {

namespace {

std::string padded(std::size_t i, std::size_t width) {
  std::string s = std::to_string(i);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

}  // namespace

WeightedGraph lattice_window(int radius) {
  if (radius < 1) raise(Errc::invalid_params, "lattice radius must be >= 1");
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
  for (int i = -radius; i <= radius; ++i) vertices.push_back({std::to_string(i), 1.0});
  for (int i = -radius; i < radius; ++i)
    edges.push_back({std::to_string(i), std::to_string(i + 1), 1.0});
  return WeightedGraph::build(std::move(vertices), std::move(edges));
}

WeightedGraph tree_ball(int q, int radius) {
  if (q < 1 || q > 9) raise(Errc::invalid_params, "tree_ball supports 1 <= q <= 9");
  if (radius < 0) raise(Errc::invalid_params, "tree radius must be >= 0");
  // 1 + (q+1)(q^radius - 1)/(q-1) vertices; refuse unmaterializable balls.
  double count = 1.0;
  double shell = 1.0;
  for (int d = 1; d <= radius; ++d) {
    shell *= (d == 1) ? (q + 1) : q;
    count += shell;
    if (count > 2e6)
      raise(Errc::invalid_params,
            "tree_ball(q=" + std::to_string(q) + ", radius=" + std::to_string(radius) +
                ") exceeds 2e6 vertices; use tree_radial_window for large radii");
  }
  std::vector<VertexSpec> vertices{{"r", 1.0}};
  std::vector<EdgeSpec> edges;
  std::vector<std::string> frontier{"r"};
  for (int d = 1; d <= radius; ++d) {
    std::vector<std::string> next;
    for (const std::string& u : frontier) {
      int children = (u == "r") ? q + 1 : q;
      for (int c = 0; c < children; ++c) {
        std::string v = u + static_cast<char>('0' + c);
        vertices.push_back({v, 1.0});
        edges.push_back({u, v, 1.0});
        next.push_back(v);
      }
    }
    frontier = std::move(next);
  }
  return WeightedGraph::build(std::move(vertices), std::move(edges));
}

WeightedGraph tree_radial_window(int q, int radius) {
  if (q < 1) raise(Errc::invalid_params, "tree_radial_window requires q >= 1");
  if (radius < 1) raise(Errc::invalid_params, "tree radius must be >= 1");
  const std::size_t width = std::to_string(radius).size();
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
  double shell_theta = 1.0;
  vertices.push_back({padded(0, width), 1.0});
  for (int d = 1; d <= radius; ++d) {
    shell_theta *= (d == 1) ? (q + 1) : q;  // (q+1) q^{d-1} vertices in shell d
    vertices.push_back({padded(d, width), shell_theta});
    edges.push_back({padded(d - 1, width), padded(d, width), shell_theta});
  }
  return WeightedGraph::build(std::move(vertices), std::move(edges));
}

WeightedGraph random_bounded_degree(std::size_t n, std::size_t max_degree,
                                    std::pair<double, double> theta_range,
                                    std::pair<double, double> w_range, std::uint64_t seed) {
  if (n == 0) raise(Errc::invalid_params, "n must be >= 1");
  if (n > 1 && max_degree < 2)
    raise(Errc::invalid_params, "max_degree must be >= 2 for n > 1");
  if (theta_range.first <= 0 || theta_range.second < theta_range.first)
    raise(Errc::invalid_params, "bad theta range");
  if (w_range.first <= 0 || w_range.second < w_range.first)
    raise(Errc::invalid_params, "bad weight range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta_dist(theta_range.first, theta_range.second);
  std::uniform_real_distribution<double> w_dist(w_range.first, w_range.second);
  const std::size_t width = std::to_string(n - 1).size();

  std::vector<VertexSpec> vertices;
  vertices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) vertices.push_back({padded(i, width), theta_dist(rng)});

  std::vector<std::size_t> degree(n, 0);
  std::vector<EdgeSpec> edges;
  auto add_edge = [&](std::size_t a, std::size_t b) {
    edges.push_back({padded(a, width), padded(b, width), w_dist(rng)});
    ++degree[a];
    ++degree[b];
  };
  // degree-capped random spanning tree
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::size_t a = pick(rng);
    while (degree[a] >= max_degree) a = (a + 1) % i;  // some vertex is below the cap
    add_edge(a, i);
  }
  // extra edges up to roughly n/2, respecting the degree cap
  auto exists = [&](std::size_t a, std::size_t b) {
    const std::string sa = padded(a, width), sb = padded(b, width);
    for (const EdgeSpec& e : edges)
      if ((e.u == sa && e.v == sb) || (e.u == sb && e.v == sa)) return true;
    return false;
  };
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t added = 0;
  for (std::size_t attempt = 0; attempt < 4 * n && added < n / 2; ++attempt) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a == b || degree[a] >= max_degree || degree[b] >= max_degree || exists(a, b)) continue;
    add_edge(a, b);
    ++added;
  }
  return WeightedGraph::build(std::move(vertices), std::move(edges));
}

double LatticeSource::theta(const std::string&) const { return 1.0; }

std::vector<std::pair<std::string, double>> LatticeSource::neighbors(const std::string& id) const {
  long long k = std::stoll(id);
  return {{std::to_string(k - 1), 1.0}, {std::to_string(k + 1), 1.0}};
}

TreeSource::TreeSource(int q) : q_(q) {
  if (q < 1 || q > 9) raise(Errc::invalid_params, "TreeSource supports 1 <= q <= 9");
}

double TreeSource::theta(const std::string&) const { return 1.0; }

std::vector<std::pair<std::string, double>> TreeSource::neighbors(const std::string& id) const {
  std::vector<std::pair<std::string, double>> out;
  if (id == "r") {
    for (int c = 0; c <= q_; ++c) out.emplace_back("r" + std::string(1, '0' + c), 1.0);
    return out;
  }
  out.emplace_back(id.substr(0, id.size() - 1), 1.0);
  for (int c = 0; c < q_; ++c) out.emplace_back(id + std::string(1, '0' + c), 1.0);
  return out;
}

}  // namespace graphheat::gen
