#include "graphheat/graph_io.hpp"

#include <cstdio>
#include <fstream>

namespace graphheat {

namespace {

double number_field(const nlohmann::json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_number())
    raise(Errc::config_error, ctx + " needs numeric field '" + key + "'");
  return obj[key].get<double>();
}

std::string string_field(const nlohmann::json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_string())
    raise(Errc::config_error, ctx + " needs string field '" + key + "'");
  return obj[key].get<std::string>();
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

GraphDocument graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
    raise(Errc::config_error, "graph document needs 'vertices' and 'edges' arrays");
  std::vector<VertexSpec> vertices;
  for (const auto& v : doc["vertices"])
    vertices.push_back({string_field(v, "id", "vertex"), number_field(v, "theta", "vertex")});
  std::vector<EdgeSpec> edges;
  for (const auto& e : doc["edges"])
    edges.push_back({string_field(e, "u", "edge"), string_field(e, "v", "edge"),
                     number_field(e, "w", "edge")});
  GraphDocument out{WeightedGraph::build(std::move(vertices), std::move(edges)), "", {}};
  if (doc.contains("meta") && doc["meta"].is_object()) {
    const auto& meta = doc["meta"];
    if (meta.contains("family")) out.family = meta["family"].get<std::string>();
    if (meta.contains("params")) out.params = meta["params"];
  }
  return out;
}

GraphDocument load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::config_error, "cannot open graph file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::config_error, "bad JSON in '" + path + "': " + e.what());
  }
  return graph_from_json(doc);
}

nlohmann::json graph_to_json(const WeightedGraph& g, const std::string& family,
                             const nlohmann::json& params) {
  nlohmann::json doc;
  auto& vertices = doc["vertices"] = nlohmann::json::array();
  for (VertexIndex v = 0; v < g.size(); ++v)
    vertices.push_back({{"id", g.id(v)}, {"theta", g.theta(v)}});
  auto& edges = doc["edges"] = nlohmann::json::array();
  for (VertexIndex u = 0; u < g.size(); ++u)
    for (const auto& nb : g.neighbors(u))
      if (u < nb.to) edges.push_back({{"u", g.id(u)}, {"v", g.id(nb.to)}, {"w", nb.w}});
  if (!family.empty()) doc["meta"] = {{"family", family}, {"params", params}};
  return doc;
}

std::string graph_to_string(const WeightedGraph& g, const std::string& family,
                            const nlohmann::json& params) {
  // Hand-rolled emission so doubles round-trip bit-exactly and files are
  // byte-stable across runs.
  std::string out = "{\n  \"vertices\": [\n";
  for (VertexIndex v = 0; v < g.size(); ++v) {
    out += "    {\"id\": " + nlohmann::json(g.id(v)).dump() +
           ", \"theta\": " + format_number(g.theta(v)) + "}";
    out += (v + 1 < g.size()) ? ",\n" : "\n";
  }
  out += "  ],\n  \"edges\": [\n";
  std::vector<std::string> lines;
  for (VertexIndex u = 0; u < g.size(); ++u)
    for (const auto& nb : g.neighbors(u))
      if (u < nb.to)
        lines.push_back("    {\"u\": " + nlohmann::json(g.id(u)).dump() +
                        ", \"v\": " + nlohmann::json(g.id(nb.to)).dump() +
                        ", \"w\": " + format_number(nb.w) + "}");
  for (std::size_t i = 0; i < lines.size(); ++i)
    out += lines[i] + (i + 1 < lines.size() ? ",\n" : "\n");
  out += "  ]";
  if (!family.empty()) {
    out += ",\n  \"meta\": {\"family\": " + nlohmann::json(family).dump() +
           ", \"params\": " + params.dump() + "}";
  }
  out += "\n}\n";
  return out;
}

void save_graph(const std::string& path, const WeightedGraph& g, const std::string& family,
                const nlohmann::json& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::config_error, "cannot write graph file '" + path + "'");
  out << graph_to_string(g, family, params);
}

}  // namespace graphheat
