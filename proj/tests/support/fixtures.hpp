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

// Synthetic bundles for tests. Everything written to disk is also kept in
// memory so tests can compare loaded data against the generator's truth.

#ifndef NEUROSCOPE_TESTS_SUPPORT_FIXTURES_HPP_
#define NEUROSCOPE_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace neuroscope::testing {

// Unique empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "neuroscope");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Question-type classes of the six-category question classification task.
inline const std::vector<std::string> kQuestionClasses = {"ABBR", "DESC", "ENTY",
                                                          "HUM",  "LOC",  "NUM"};

// tokens -> embedding -> {conv3,conv4,conv5} -> {maxpool3,4,5} -> concat -> fc
// -> softmax. 21 nodes; concat_out, fc_out and softmax_out are inspectable.
nlohmann::json word_cnn_graph(std::size_t branches = 3);
// t_in -> conv -> t_out.
nlohmann::json chain_graph();

struct GeneratedBundle {
  std::filesystem::path dir;
  std::vector<std::string> classes;
  std::vector<nlohmann::json> records;   // instances.jsonl lines
  std::vector<std::size_t> true_class;
  std::vector<std::size_t> predicted_class;
  std::map<std::string, std::vector<float>> matrices;  // node -> row-major
  std::map<std::string, std::size_t> widths;

  std::size_t n() const { return records.size(); }
  const float* row(const std::string& node, std::size_t i) const {
    return matrices.at(node).data() + i * widths.at(node);
  }
};

// Writes graph.json, manifest.json, instances.jsonl and one .act per node.
void write_bundle(const std::filesystem::path& dir, const nlohmann::json& graph,
                  const GeneratedBundle& data);

struct ScenarioOptions {
  std::size_t n_instances = 1000;
  std::size_t hidden = 128;
  std::uint64_t seed = 7;
};

// Question-classification-shaped bundle over kQuestionClasses on the word-CNN
// graph with dumps for concat_out (3*hidden), fc_out (hidden) and softmax_out
// (6). Class means in fc_out are well separated except DESC and NUM, which
// overlap, so NUM has misclassified instances predicted as DESC. Instances
// #38 and #47 are correct; #120 and #126 are NUM instances predicted DESC.
// About a third of NUM and most DESC texts begin with "What is".
GeneratedBundle make_scenario_bundle(const std::filesystem::path& dir,
                                     const ScenarioOptions& options = {});

struct RandomBundleOptions {
  std::size_t n_instances = 200;
  std::size_t n_classes = 4;
  std::vector<std::size_t> widths = {16};  // one inspectable node per width
  bool features = false;  // feature payloads instead of text
  std::uint64_t seed = 1;
};

// Random labels, scores and activations (including negative values) on a
// chain graph extended with one inspectable tensor per width: node ids are
// "h0", "h1", ...
GeneratedBundle make_random_bundle(const std::filesystem::path& dir,
                                   const RandomBundleOptions& options);

}  // namespace neuroscope::testing

#endif  // NEUROSCOPE_TESTS_SUPPORT_FIXTURES_HPP_
