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

#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <unistd.h>

namespace neuroscope::testing {

namespace fs = std::filesystem;
using nlohmann::json;

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          (prefix + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter.fetch_add(1)));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

json tensor(const std::string& id, bool inspectable = false) {
  return {{"id", id}, {"kind", "tensor"}, {"name", id}, {"inspectable", inspectable}};
}

json op(const std::string& id, const std::string& type) {
  return {{"id", id}, {"kind", "operator"}, {"name", id}, {"op_type", type}};
}

json edge(const std::string& from, const std::string& to) {
  return {{"from", from}, {"to", to}};
}

// Raw little-endian dump writer, kept separate from the library's writer so
// loader tests do not depend on the code under test to produce their input.
void write_dump(const fs::path& path, std::uint64_t rows, std::uint64_t cols,
                const std::vector<float>& values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  const std::uint32_t version = 1;
  out.write("ACTV", 4);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(float)));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double z = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - top);
    z += out[k];
  }
  for (double& v : out) v /= z;
  return out;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

json word_cnn_graph(std::size_t branches) {
  json nodes = json::array();
  json edges = json::array();
  nodes.push_back(tensor("tokens"));
  nodes.push_back(op("embedding", "embedding_lookup"));
  nodes.push_back(tensor("emb_out"));
  edges.push_back(edge("tokens", "embedding"));
  edges.push_back(edge("embedding", "emb_out"));
  nodes.push_back(op("concat", "concat"));
  for (std::size_t b = 0; b < branches; ++b) {
    const std::string w = std::to_string(b + 3);
    nodes.push_back(op("conv" + w, "conv"));
    nodes.push_back(tensor("conv" + w + "_out"));
    nodes.push_back(op("maxpool" + w, "maxpool"));
    nodes.push_back(tensor("pool" + w + "_out"));
    edges.push_back(edge("emb_out", "conv" + w));
    edges.push_back(edge("conv" + w, "conv" + w + "_out"));
    edges.push_back(edge("conv" + w + "_out", "maxpool" + w));
    edges.push_back(edge("maxpool" + w, "pool" + w + "_out"));
    edges.push_back(edge("pool" + w + "_out", "concat"));
  }
  nodes.push_back(tensor("concat_out", true));
  nodes.push_back(op("fc", "matmul"));
  nodes.push_back(tensor("fc_out", true));
  nodes.push_back(op("softmax", "softmax"));
  nodes.push_back(tensor("softmax_out", true));
  edges.push_back(edge("concat", "concat_out"));
  edges.push_back(edge("concat_out", "fc"));
  edges.push_back(edge("fc", "fc_out"));
  edges.push_back(edge("fc_out", "softmax"));
  edges.push_back(edge("softmax", "softmax_out"));
  return {{"nodes", nodes}, {"edges", edges}};
}

json chain_graph() {
  return {{"nodes", {tensor("t_in"), op("conv", "conv"), tensor("t_out", true)}},
          {"edges", {edge("t_in", "conv"), edge("conv", "t_out")}}};
}

void write_bundle(const fs::path& dir, const json& graph, const GeneratedBundle& data) {
  fs::create_directories(dir);
  std::ofstream(dir / "graph.json") << graph.dump(2);
  json nodes = json::array();
  for (const auto& [node, width] : data.widths) {
    nodes.push_back({{"id", node}, {"file", node + ".act"}, {"neurons", width}});
    write_dump(dir / (node + ".act"), data.n(), width, data.matrices.at(node));
  }
  const json manifest = {{"classes", data.classes},
                         {"nodes", nodes},
                         {"n_instances", data.n()}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2);
  std::ofstream lines(dir / "instances.jsonl");
  for (const json& r : data.records) lines << r.dump() << "\n";
}

GeneratedBundle make_scenario_bundle(const fs::path& dir, const ScenarioOptions& options) {
  constexpr std::size_t kDesc = 1;
  constexpr std::size_t kHum = 3;
  constexpr std::size_t kLoc = 4;
  constexpr std::size_t kNum = 5;
  const std::size_t n = options.n_instances;
  const std::size_t h = options.hidden;
  const std::size_t k = kQuestionClasses.size();

  GeneratedBundle out;
  out.dir = dir;
  out.classes = kQuestionClasses;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, 0.25);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Each class lights up its own block of neurons; NUM also leans on DESC's.
  const std::size_t block = h / k;
  std::vector<std::vector<double>> means(k, std::vector<double>(h, 0.1));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = c * block; j < (c + 1) * block; ++j) means[c][j] = 1.0;
  }
  for (std::size_t j = kDesc * block; j < (kDesc + 1) * block; ++j) means[kNum][j] = 0.6;
  for (std::size_t j = kNum * block; j < (kNum + 1) * block; ++j) means[kNum][j] = 0.7;

  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % k;
  std::shuffle(labels.begin(), labels.end(), rng);
  auto force = [&](std::size_t index, std::size_t label) {
    if (index < n) labels[index] = label;
  };
  force(38, kLoc);
  force(47, kHum);
  force(120, kNum);
  force(126, kNum);

  const std::vector<std::string> desc_other = {"Describe the process of photosynthesis .",
                                               "Why do leaves change color ?"};
  const std::map<std::size_t, std::vector<std::string>> openers = {
      {0, {"What does NASA stand for ?", "What is the abbreviation for pound ?"}},
      {2, {"Which animal is the fastest ?", "What color is a ruby ?"}},
      {3, {"Who wrote Hamlet ?", "Who invented the telephone ?"}},
      {4, {"Where is the Eiffel Tower ?", "What is the capital of Peru ?"}},
  };

  out.true_class = labels;
  out.predicted_class.resize(n);
  out.widths = {{"concat_out", 3 * h}, {"fc_out", h}, {"softmax_out", k}};
  auto& concat = out.matrices["concat_out"];
  auto& fc = out.matrices["fc_out"];
  auto& soft = out.matrices["softmax_out"];
  concat.reserve(n * 3 * h);
  fc.reserve(n * h);
  soft.reserve(n * k);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = labels[i];
    // NUM instances drift toward DESC; a drift past the midpoint flips the
    // prediction.
    double drift = c == kNum ? 0.8 * unit(rng) : 0.0;
    if (i == 120 || i == 126) drift = 1.0;
    if (i == 38 || i == 47) drift = 0.0;
    std::vector<double> hidden(h);
    for (std::size_t j = 0; j < h; ++j) {
      const double mean = (1.0 - drift) * means[c][j] + drift * means[kDesc][j];
      const double jitter = (i == 38 || i == 47 || i == 120 || i == 126) ? 0.0 : noise(rng);
      hidden[j] = std::max(0.0, mean + jitter);
    }
    std::vector<double> logits(k);
    for (std::size_t m = 0; m < k; ++m) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < h; ++j) d2 += (hidden[j] - means[m][j]) * (hidden[j] - means[m][j]);
      logits[m] = -d2 / 4.0;
    }
    const std::vector<double> scores = softmax(logits);
    const std::size_t predicted = argmax(scores);
    out.predicted_class[i] = predicted;

    for (double v : hidden) fc.push_back(static_cast<float>(v));
    for (double v : hidden) concat.push_back(static_cast<float>(v + 0.1 * noise(rng)));
    for (double v : hidden) concat.push_back(static_cast<float>(0.5 * v + 0.1 * noise(rng)));
    for (std::size_t j = 0; j < h; ++j) concat.push_back(static_cast<float>(std::max(0.0, noise(rng))));
    for (double s : scores) soft.push_back(static_cast<float>(s));

    std::string text;
    const double roll = unit(rng);
    if (c == kDesc) {
      text = roll < 0.8 ? "What is the meaning of life ?" : desc_other[i % desc_other.size()];
    } else if (c == kNum) {
      text = roll < 0.35 ? "What is the diameter of a golf ball ?" : "How many feet are in a mile ?";
    } else {
      const auto& pool = openers.at(c);
      text = pool[i % pool.size()];
    }
    out.records.push_back({{"id", std::to_string(i)},
                           {"true_label", kQuestionClasses[c]},
                           {"predicted_label", kQuestionClasses[predicted]},
                           {"scores", scores},
                           {"text", text}});
  }
  write_bundle(dir, word_cnn_graph(), out);
  return out;
}

GeneratedBundle make_random_bundle(const fs::path& dir, const RandomBundleOptions& options) {
  GeneratedBundle out;
  out.dir = dir;
  for (std::size_t c = 0; c < options.n_classes; ++c) {
    out.classes.push_back("C" + std::to_string(c));
  }
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_class(0, options.n_classes - 1);
  const std::vector<std::string> topics = {"sports", "politics", "science"};
  const std::vector<std::string> openers = {"What is", "Who is", "Where is", "How many",
                                            "What is the"};
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "sports"};

  json nodes = json::array({tensor("t_in")});
  json edges = json::array();
  std::string prev = "t_in";
  for (std::size_t w = 0; w < options.widths.size(); ++w) {
    const std::string id = "h" + std::to_string(w);
    const std::string op_id = "op" + std::to_string(w);
    nodes.push_back(op(op_id, "dense"));
    nodes.push_back(tensor(id, true));
    edges.push_back(edge(prev, op_id));
    edges.push_back(edge(op_id, id));
    prev = id;
    out.widths[id] = options.widths[w];
  }

  const std::size_t n = options.n_instances;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = pick_class(rng);
    std::vector<double> scores(options.n_classes);
    for (double& s : scores) s = unit(rng);
    // Bias toward the true class so roughly half are correct.
    if (unit(rng) < 0.5) scores[c] += 1.0;
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    for (double& s : scores) s /= total;
    const std::size_t predicted = argmax(scores);
    out.true_class.push_back(c);
    out.predicted_class.push_back(predicted);

    json record = {{"id", "r" + std::to_string(i)},
                   {"true_label", out.classes[c]},
                   {"predicted_label", out.classes[predicted]},
                   {"scores", scores}};
    if (options.features) {
      json f = json::object();
      if (unit(rng) < 0.8) f["age"] = static_cast<int>(10 + 60 * unit(rng));
      f["topic"] = topics[static_cast<std::size_t>(unit(rng) * topics.size()) % topics.size()];
      f["verified"] = unit(rng) < 0.5;
      record["features"] = f;
    } else {
      std::string text = openers[static_cast<std::size_t>(unit(rng) * openers.size()) % openers.size()];
      for (int wi = 0; wi < 3; ++wi) {
        text += " " + words[static_cast<std::size_t>(unit(rng) * words.size()) % words.size()];
      }
      record["text"] = text;
    }
    out.records.push_back(record);
  }
  for (const auto& [id, width] : out.widths) {
    auto& m = out.matrices[id];
    m.resize(n * width);
    for (float& v : m) v = static_cast<float>(normal(rng));
  }

  write_bundle(dir, json{{"nodes", nodes}, {"edges", edges}}, out);
  return out;
}

}  // namespace neuroscope::testing
