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

// Internal JSON encoders/decoders shared by the loaders and the HTTP layer.

#ifndef NEUROSCOPE_SRC_JSON_CODEC_HPP_
#define NEUROSCOPE_SRC_JSON_CODEC_HPP_

#include <span>
#include <string>

#include "json.hpp"
#include "neuroscope/activation_store.hpp"
#include "neuroscope/graph.hpp"

namespace neuroscope {

// Rounds to 9 significant digits, the precision of every numeric payload we
// serve. Non-finite input yields null.
nlohmann::json num9(double value);
nlohmann::json num9_array(std::span<const double> values);
nlohmann::json num9_array(std::span<const float> values);

// "%.9g" text of a value, for CSV output.
std::string format9(double value);

nlohmann::json graph_to_json(const ComputationGraph& graph);
nlohmann::json node_to_json(const GraphNode& node);
ComputationGraph graph_from_json(const nlohmann::json& doc);

nlohmann::json record_to_json(const InstanceRecord& record);

}  // namespace neuroscope

#endif  // NEUROSCOPE_SRC_JSON_CODEC_HPP_
