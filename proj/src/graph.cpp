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

#include "neuroscope/graph.hpp"

#include <functional>
#include <queue>
#include <utility>

#include "json_codec.hpp"
#include "neuroscope/error.hpp"

namespace neuroscope {

std::string_view node_kind_name(NodeKind kind) {
  return kind == NodeKind::kOperator ? "operator" : "tensor";
}

ComputationGraph ComputationGraph::build(std::vector<GraphNode> nodes,
                                         std::vector<GraphEdge> edges) {
  ComputationGraph g;
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);

  const std::size_t n = g.nodes_.size();
  g.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GraphNode& node = g.nodes_[i];
    if (node.id.empty()) {
      throw Error(ErrorCode::kSyntaxError, "node id must be non-empty");
    }
    if (!g.index_.emplace(node.id, i).second) {
      throw Error(ErrorCode::kDuplicateNodeId,
                  "duplicate node id '" + node.id + "'");
    }
  }

  g.preds_.assign(n, {});
  g.succs_.assign(n, {});
  for (const GraphEdge& e : g.edges_) {
    auto from = g.index_.find(e.from);
    auto to = g.index_.find(e.to);
    if (from == g.index_.end() || to == g.index_.end()) {
      const std::string& missing = from == g.index_.end() ? e.from : e.to;
      throw Error(ErrorCode::kDanglingEdge,
                  "edge " + e.from + " -> " + e.to +
                      " references undeclared node '" + missing + "'");
    }
    if (g.nodes_[from->second].kind == g.nodes_[to->second].kind) {
      throw Error(ErrorCode::kBipartiteViolation,
                  "edge " + e.from + " -> " + e.to + " joins two " +
                      std::string(node_kind_name(g.nodes_[to->second].kind)) +
                      " nodes");
    }
    g.succs_[from->second].push_back(to->second);
    g.preds_[to->second].push_back(from->second);
  }

  std::vector<std::size_t> pending(n);
  std::priority_queue<std::size_t, std::vector<std::size_t>,
                      std::greater<std::size_t>>
      ready;
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = g.preds_[i].size();
    if (pending[i] == 0) ready.push(i);
  }
  g.topo_order_.reserve(n);
  while (!ready.empty()) {
    const std::size_t i = ready.top();
    ready.pop();
    g.topo_order_.push_back(g.nodes_[i].id);
    for (std::size_t s : g.succs_[i]) {
      if (--pending[s] == 0) ready.push(s);
    }
  }
  if (g.topo_order_.size() != n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (pending[i] != 0) {
        throw Error(ErrorCode::kCycleDetected,
                    "graph has a directed cycle through '" +
                        g.nodes_[i].id + "'");
      }
    }
  }
  return g;
}

const GraphNode* ComputationGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const GraphNode& ComputationGraph::at(std::string_view id) const {
  const GraphNode* node = find(id);
  if (node == nullptr) {
    throw Error(ErrorCode::kUnknownNode,
                "unknown node '" + std::string(id) + "'");
  }
  return *node;
}

Neighbors ComputationGraph::neighbors(std::string_view id) const {
  const std::size_t i = static_cast<std::size_t>(&at(id) - nodes_.data());
  Neighbors out;
  for (std::size_t p : preds_[i]) out.predecessors.push_back(nodes_[p]);
  for (std::size_t s : succs_[i]) out.successors.push_back(nodes_[s]);
  return out;
}

std::vector<GraphNode> ComputationGraph::inspectable_nodes() const {
  std::vector<GraphNode> out;
  for (const NodeId& id : topo_order_) {
    const GraphNode& node = nodes_[index_.at(id)];
    if (node.kind == NodeKind::kTensor && node.inspectable) {
      out.push_back(node);
    }
  }
  return out;
}

std::size_t ComputationGraph::in_degree(std::string_view id) const {
  return preds_[static_cast<std::size_t>(&at(id) - nodes_.data())].size();
}

std::size_t ComputationGraph::out_degree(std::string_view id) const {
  return succs_[static_cast<std::size_t>(&at(id) - nodes_.data())].size();
}

ComputationGraph parse_graph(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSyntaxError,
                std::string("graph document: ") + e.what(), e.byte);
  }
  return graph_from_json(doc);
}

std::string serialize_graph(const ComputationGraph& graph) {
  return graph_to_json(graph).dump(2) + "\n";
}

}  // namespace neuroscope
