#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "graphheat/graph.hpp"

namespace graphheat {

/// Graph plus optional provenance: generator family name and parameters,
/// written by the CLI `gen` command and used by `compare` to pick a closed
/// form.
struct GraphDocument {
  WeightedGraph graph;
  std::string family;     // "" when not generated
  nlohmann::json params;  // generator parameters, if any
};

GraphDocument graph_from_json(const nlohmann::json& doc);
GraphDocument load_graph(const std::string& path);

nlohmann::json graph_to_json(const WeightedGraph& g, const std::string& family = "",
                             const nlohmann::json& params = nlohmann::json::object());
/// Byte-stable serialization (sorted keys, 17-significant-digit numbers).
std::string graph_to_string(const WeightedGraph& g, const std::string& family = "",
                            const nlohmann::json& params = nlohmann::json::object());
void save_graph(const std::string& path, const WeightedGraph& g, const std::string& family = "",
                const nlohmann::json& params = nlohmann::json::object());

}  // namespace graphheat
