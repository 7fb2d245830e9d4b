// Copyright 2026 The Neuroscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "json_codec.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>
#include <vector>

#include "neuroscope/error.hpp"

namespace neuroscope {

std::string format9(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

nlohmann::json num9(double value) {
  if (!std::isfinite(value)) return nullptr;
  // Shortest round-trip of the 9-digit decimal is what nlohmann emits.
  return std::strtod(format9(value).c_str(), nullptr);
}

nlohmann::json num9_array(std::span<const double> values) {
  nlohmann::json out = nlohmann::json::array();
  for (double v : values) out.push_back(num9(v));
  return out;
}

nlohmann::json num9_array(std::span<const float> values) {
  nlohmann::json out = nlohmann::json::array();
  for (float v : values) out.push_back(num9(v));
  return out;
}

nlohmann::json node_to_json(const GraphNode& node) {
  nlohmann::json j = {{"id", node.id},
                      {"kind", node_kind_name(node.kind)},
                      {"name", node.display_name}};
  if (node.kind == NodeKind::kOperator) {
    j["op_type"] = node.op_type.value_or("");
  } else {
    j["inspectable"] = node.inspectable;
  }
  return j;
}

nlohmann::json graph_to_json(const ComputationGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const GraphNode& node : graph.nodes()) nodes.push_back(node_to_json(node));
  nlohmann::json edges = nlohmann::json::array();
  for (const GraphEdge& e : graph.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}});
  }
  return {{"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"topo_order", graph.topo_order()}};
}

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::kSyntaxError, "graph document: " + what);
}

std::string require_string(const nlohmann::json& obj, const char* key,
                           const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    schema_error(context + " needs string field '" + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

ComputationGraph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) schema_error("top level must be an object");
  auto nodes_it = doc.find("nodes");
  auto edges_it = doc.find("edges");
  if (nodes_it == doc.end() || !nodes_it->is_array()) {
    schema_error("'nodes' must be an array");
  }
  if (edges_it == doc.end() || !edges_it->is_array()) {
    schema_error("'edges' must be an array");
  }

  std::vector<GraphNode> nodes;
  nodes.reserve(nodes_it->size());
  for (std::size_t i = 0; i < nodes_it->size(); ++i) {
    const nlohmann::json& jn = (*nodes_it)[i];
    const std::string ctx = "nodes[" + std::to_string(i) + "]";
    if (!jn.is_object()) schema_error(ctx + " must be an object");
    GraphNode node;
    node.id = require_string(jn, "id", ctx);
    if (node.id.empty()) schema_error(ctx + " has an empty id");
    const std::string kind = require_string(jn, "kind", ctx);
    if (kind == "operator") {
      node.kind = NodeKind::kOperator;
    } else if (kind == "tensor") {
      node.kind = NodeKind::kTensor;
    } else {
      schema_error(ctx + " has unknown kind '" + kind + "'");
    }
    node.display_name = jn.contains("name") ? require_string(jn, "name", ctx)
                                            : node.id;
    if (jn.contains("op_type")) {
      if (node.kind != NodeKind::kOperator) {
        schema_error(ctx + " is a tensor but declares op_type");
      }
      node.op_type = require_string(jn, "op_type", ctx);
    } else if (node.kind == NodeKind::kOperator) {
      schema_error(ctx + " is an operator without op_type");
    }
    if (auto it = jn.find("inspectable"); it != jn.end()) {
      if (!it->is_boolean()) schema_error(ctx + ".inspectable must be boolean");
      if (node.kind != NodeKind::kTensor && it->get<bool>()) {
        schema_error(ctx + " is an operator flagged inspectable");
      }
      node.inspectable = it->get<bool>();
    }
    nodes.push_back(std::move(node));
  }

  std::vector<GraphEdge> edges;
  edges.reserve(edges_it->size());
  for (std::size_t i = 0; i < edges_it->size(); ++i) {
    const nlohmann::json& je = (*edges_it)[i];
    const std::string ctx = "edges[" + std::to_string(i) + "]";
    if (!je.is_object()) schema_error(ctx + " must be an object");
    edges.push_back({require_string(je, "from", ctx),
                     require_string(je, "to", ctx)});
  }
  return ComputationGraph::build(std::move(nodes), std::move(edges));
}

nlohmann::json record_to_json(const InstanceRecord& record) {
  nlohmann::json j = {{"index", record.index},
                      {"id", record.id},
                      {"true_label", record.true_label},
                      {"predicted_label", record.predicted_label},
                      {"correct", record.correct()},
                      {"scores", num9_array(std::span<const double>(record.scores))}};
  if (const std::string* text = record.text()) {
    j["text"] = *text;
  } else if (const FeatureMap* features = record.features()) {
    nlohmann::json jf = nlohmann::json::object();
    for (const auto& [name, value] : *features) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              jf[name] = num9(v);
            } else {
              jf[name] = v;
            }
          },
          value);
    }
    j["features"] = std::move(jf);
  }
  return j;
}

}  // namespace neuroscope
