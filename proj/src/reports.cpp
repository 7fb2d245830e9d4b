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

#include "neuroscope/reports.hpp"

#include "json_codec.hpp"
#include "neuroscope/aggregation.hpp"
#include "neuroscope/subset.hpp"

namespace neuroscope {

std::string bundle_summary(const Bundle& bundle) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& [id, m] : bundle.matrices) {
    nodes.push_back({{"id", id}, {"instances", m.n_instances()}, {"neurons", m.n_neurons()}});
  }
  std::size_t correct = 0;
  for (const InstanceRecord& r : bundle.instances) correct += r.correct() ? 1 : 0;
  nlohmann::json out = {{"status", "ok"},
                        {"graph_nodes", bundle.graph.nodes().size()},
                        {"graph_edges", bundle.graph.edges().size()},
                        {"classes", bundle.classes},
                        {"instances", bundle.n_instances()},
                        {"correct", correct},
                        {"nodes", std::move(nodes)},
                        {"warnings", bundle.warnings}};
  return out.dump(2) + "\n";
}

std::string aggregate_csv(const Bundle& bundle, std::string_view node) {
  const ActivationMatrix& a = bundle.matrix(node);
  const MembershipMatrix membership =
      build_membership(default_class_subsets(bundle), bundle);
  const SubsetActivationMatrix view = aggregate_subsets(a, membership);

  std::string out = "subset,members";
  for (std::size_t c = 0; c < view.n_neurons; ++c) out += ",n" + std::to_string(c);
  out += "\n";
  for (std::size_t r = 0; r < view.n_rows(); ++r) {
    out += view.row_keys[r].subset_id + "," + std::to_string(view.row_counts[r]);
    const bool empty = view.empty_rows.count(r) != 0;
    for (double v : view.row(r)) {
      out += ",";
      if (!empty) out += format9(v);
    }
    out += "\n";
  }
  return out;
}

std::string projection_csv(const ProjectionResult& result) {
  std::string out = "instance,x,y\n";
  for (std::size_t k = 0; k < result.point_ids.size(); ++k) {
    out += std::to_string(result.point_ids[k]) + "," + format9(result.coords[2 * k]) +
           "," + format9(result.coords[2 * k + 1]) + "\n";
  }
  return out;
}

}  // namespace neuroscope
