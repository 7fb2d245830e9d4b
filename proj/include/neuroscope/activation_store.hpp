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

#ifndef NEUROSCOPE_ACTIVATION_STORE_HPP_
#define NEUROSCOPE_ACTIVATION_STORE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "neuroscope/graph.hpp"

namespace neuroscope {

// Dense row-major float32 matrix: one row per instance, one column per neuron.
class ActivationMatrix {
 public:
  ActivationMatrix() = default;
  // Throws InvalidArgument if values.size() != rows * cols.
  ActivationMatrix(NodeId node_id, std::size_t rows, std::size_t cols,
                   std::vector<float> values);

  const NodeId& node_id() const { return node_id_; }
  std::size_t n_instances() const { return rows_; }
  std::size_t n_neurons() const { return cols_; }
  std::span<const float> values() const { return values_; }
  std::span<const float> row(std::size_t instance) const {
    return {values_.data() + instance * cols_, cols_};
  }

 private:
  NodeId node_id_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> values_;
};

using FeatureValue = std::variant<double, std::string, bool>;
using FeatureMap = std::map<std::string, FeatureValue>;
// Display payload: raw text or a feature map.
using DisplayPayload = std::variant<std::string, FeatureMap>;

struct InstanceRecord {
  std::size_t index = 0;
  std::string id;
  std::string true_label;
  std::string predicted_label;
  std::size_t true_class = 0;
  std::size_t predicted_class = 0;
  std::vector<double> scores;
  DisplayPayload display;

  bool correct() const { return true_class == predicted_class; }
  const std::string* text() const { return std::get_if<std::string>(&display); }
  const FeatureMap* features() const {
    return std::get_if<FeatureMap>(&display);
  }
};

struct Bundle {
  ComputationGraph graph;
  std::vector<std::string> classes;
  std::vector<InstanceRecord> instances;
  std::map<NodeId, ActivationMatrix> matrices;
  // Non-fatal load findings, e.g. an inspectable node without a dump.
  std::vector<std::string> warnings;

  std::size_t n_instances() const { return instances.size(); }
  const ActivationMatrix& matrix(std::string_view node) const;  // UnknownNode
  std::size_t class_index(std::string_view label) const;  // LabelOutsideClassList
};

inline constexpr char kDumpMagic[4] = {'A', 'C', 'T', 'V'};
inline constexpr std::uint32_t kDumpVersion = 1;
inline constexpr std::size_t kDumpHeaderBytes = 24;

struct DumpHeader {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
};

// Writes a `<node>.act` file: "ACTV", u32 version, u64 rows, u64 cols, then
// rows*cols little-endian float32 values.
void write_activation_dump(const std::filesystem::path& path,
                           std::uint64_t rows, std::uint64_t cols,
                           std::span<const float> values);

DumpHeader read_dump_header(const std::filesystem::path& path);

// Reads and checks a dump against the expected shape. Throws MissingFile,
// HeaderMismatch or NonFiniteActivation.
ActivationMatrix read_activation_dump(const std::filesystem::path& path,
                                      const NodeId& node_id,
                                      std::size_t expected_rows,
                                      std::size_t expected_cols);

// Loads graph.json, manifest.json, instances.jsonl and every listed dump,
// enforcing cross-file consistency.
Bundle load_bundle(const std::filesystem::path& dir);

// Copy of one instance's activations at `node`. Throws UnknownNode or
// IndexOutOfRange.
std::vector<float> activation_row(const Bundle& bundle, std::string_view node,
                                  std::size_t instance);

// argmax with ties going to the earliest class.
std::size_t argmax_class(std::span<const double> scores);

}  // namespace neuroscope

#endif  // NEUROSCOPE_ACTIVATION_STORE_HPP_
