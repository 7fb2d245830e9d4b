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

#ifndef NEUROSCOPE_GRAPH_HPP_
#define NEUROSCOPE_GRAPH_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace neuroscope {

using NodeId = std::string;

enum class NodeKind { kOperator, kTensor };

struct GraphNode {
  NodeId id;
  NodeKind kind = NodeKind::kTensor;
  std::string display_name;
  std::optional<std::string> op_type;  // operators only
  bool inspectable = false;            // tensors only

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  NodeId from;
  NodeId to;

  bool operator==(const GraphEdge&) const = default;
};

struct Neighbors {
  std::vector<GraphNode> predecessors;
  std::vector<GraphNode> successors;
};

// Bipartite operator/tensor DAG. Immutable once built; every constructor path
// goes through validation, so a ComputationGraph value always satisfies the
// DAG + bipartite invariants and carries a topological order.
class ComputationGraph {
 public:
  ComputationGraph() = default;

  // Validates and builds. Throws Error with DuplicateNodeId, DanglingEdge,
  // BipartiteViolation or CycleDetected.
  static ComputationGraph build(std::vector<GraphNode> nodes,
                                std::vector<GraphEdge> edges);

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  // Kahn order; among ready nodes the earliest-declared goes first.
  const std::vector<NodeId>& topo_order() const { return topo_order_; }

  const GraphNode* find(std::string_view id) const;
  const GraphNode& at(std::string_view id) const;  // throws UnknownNode

  Neighbors neighbors(std::string_view id) const;
  // Tensor nodes flagged inspectable, in topological order.
  std::vector<GraphNode> inspectable_nodes() const;

  std::size_t in_degree(std::string_view id) const;
  std::size_t out_degree(std::string_view id) const;

  bool operator==(const ComputationGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<NodeId> topo_order_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::vector<std::size_t>> succs_;
};

// Parses the graph.json document. Throws SyntaxError on malformed JSON or
// schema violations, plus the validation errors of ComputationGraph::build.
ComputationGraph parse_graph(std::string_view document);

// Canonical graph.json text; parse_graph(serialize_graph(g)) == g.
std::string serialize_graph(const ComputationGraph& graph);

std::string_view node_kind_name(NodeKind kind);

}  // namespace neuroscope

#endif  // NEUROSCOPE_GRAPH_HPP_
