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

#include "neuroscope/activation_store.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "json_codec.hpp"
#include "neuroscope/error.hpp"

namespace neuroscope {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little,
              "activation dumps are read in place as little-endian float32");

ActivationMatrix::ActivationMatrix(NodeId node_id, std::size_t rows,
                                   std::size_t cols, std::vector<float> values)
    : node_id_(std::move(node_id)),
      rows_(rows),
      cols_(cols),
      values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kInvalidArgument,
                "activation matrix for '" + node_id_ + "' holds " +
                    std::to_string(values_.size()) + " values, expected " +
                    std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

const ActivationMatrix& Bundle::matrix(std::string_view node) const {
  auto it = matrices.find(std::string(node));
  if (it == matrices.end()) {
    throw Error(ErrorCode::kUnknownNode,
                "no activations for node '" + std::string(node) + "'");
  }
  return it->second;
}

std::size_t Bundle::class_index(std::string_view label) const {
  auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) {
    throw Error(ErrorCode::kLabelOutsideClassList,
                "label '" + std::string(label) + "' is not a declared class");
  }
  return static_cast<std::size_t>(it - classes.begin());
}

std::size_t argmax_class(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Dump files

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <typename T>
T get_le(const char* bytes) {
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  }
  return in;
}

std::string read_text(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_activation_dump(const fs::path& path, std::uint64_t rows,
                           std::uint64_t cols, std::span<const float> values) {
  if (values.size() != rows * cols) {
    throw Error(ErrorCode::kInvalidArgument,
                "dump payload size does not match rows x cols");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(kDumpMagic, sizeof kDumpMagic);
  put_le<std::uint32_t>(out, kDumpVersion);
  put_le<std::uint64_t>(out, rows);
  put_le<std::uint64_t>(out, cols);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size_bytes()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

DumpHeader read_dump_header(const fs::path& path) {
  std::ifstream in = open_input(path);
  char header[kDumpHeaderBytes];
  in.read(header, sizeof header);
  if (in.gcount() != static_cast<std::streamsize>(sizeof header)) {
    throw Error(ErrorCode::kHeaderMismatch,
                path.string() + ": truncated header");
  }
  if (std::memcmp(header, kDumpMagic, sizeof kDumpMagic) != 0) {
    throw Error(ErrorCode::kHeaderMismatch, path.string() + ": bad magic");
  }
  const auto version = get_le<std::uint32_t>(header + 4);
  if (version != kDumpVersion) {
    throw Error(ErrorCode::kHeaderMismatch,
                path.string() + ": unsupported version " +
                    std::to_string(version));
  }
  return {get_le<std::uint64_t>(header + 8), get_le<std::uint64_t>(header + 16)};
}

ActivationMatrix read_activation_dump(const fs::path& path,
                                      const NodeId& node_id,
                                      std::size_t expected_rows,
                                      std::size_t expected_cols) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kMissingFile, "missing dump " + path.string());
  }
  const DumpHeader header = read_dump_header(path);
  if (header.rows != expected_rows || header.cols != expected_cols) {
    throw Error(ErrorCode::kHeaderMismatch,
                path.string() + ": header says " + std::to_string(header.rows) +
                    "x" + std::to_string(header.cols) + ", manifest expects " +
                    std::to_string(expected_rows) + "x" +
                    std::to_string(expected_cols));
  }
  const std::uintmax_t payload = fs::file_size(path) - kDumpHeaderBytes;
  const std::uintmax_t expected = header.rows * header.cols * sizeof(float);
  if (payload != expected) {
    throw Error(ErrorCode::kHeaderMismatch,
                path.string() + ": payload holds " + std::to_string(payload) +
                    " bytes, header implies " + std::to_string(expected));
  }

  std::vector<float> values(expected_rows * expected_cols);
  std::ifstream in = open_input(path);
  in.seekg(static_cast<std::streamoff>(kDumpHeaderBytes));
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(expected));
  if (!in) throw Error(ErrorCode::kIoError, "short read from " + path.string());

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kNonFiniteActivation,
                  path.string() + ": non-finite value at row " +
                      std::to_string(i / expected_cols) + ", column " +
                      std::to_string(i % expected_cols));
    }
  }
  return ActivationMatrix(node_id, expected_rows, expected_cols,
                          std::move(values));
}

// ---------------------------------------------------------------------------
// Bundle

namespace {

struct ManifestEntry {
  NodeId id;
  std::string file;
  std::size_t neurons = 0;
};

struct Manifest {
  std::vector<std::string> classes;
  std::vector<ManifestEntry> nodes;
  std::size_t n_instances = 0;
};

nlohmann::json parse_json_file(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSyntaxError,
                path.filename().string() + ": " + e.what(), e.byte);
  }
}

[[noreturn]] void manifest_error(const std::string& what) {
  throw Error(ErrorCode::kSyntaxError, "manifest.json: " + what);
}

Manifest parse_manifest(const nlohmann::json& j) {
  Manifest m;
  if (!j.is_object()) manifest_error("top level must be an object");
  if (!j.contains("classes") || !j["classes"].is_array()) {
    manifest_error("'classes' must be an array of strings");
  }
  for (const auto& c : j["classes"]) {
    if (!c.is_string()) manifest_error("class names must be strings");
    m.classes.push_back(c.get<std::string>());
  }
  if (!j.contains("n_instances") || !j["n_instances"].is_number_unsigned()) {
    manifest_error("'n_instances' must be a non-negative integer");
  }
  m.n_instances = j["n_instances"].get<std::size_t>();
  if (!j.contains("nodes") || !j["nodes"].is_array()) {
    manifest_error("'nodes' must be an array");
  }
  for (const auto& jn : j["nodes"]) {
    if (!jn.is_object() || !jn.contains("id") || !jn["id"].is_string() ||
        !jn.contains("file") || !jn["file"].is_string() ||
        !jn.contains("neurons") || !jn["neurons"].is_number_unsigned()) {
      manifest_error("node entries need string 'id', 'file', integer 'neurons'");
    }
    m.nodes.push_back({jn["id"].get<std::string>(),
                       jn["file"].get<std::string>(),
                       jn["neurons"].get<std::size_t>()});
  }
  return m;
}

void check_classes(const std::vector<std::string>& classes) {
  if (classes.empty()) {
    throw Error(ErrorCode::kInvalidMetadata, "class list is empty");
  }
  std::set<std::string> seen;
  for (const std::string& c : classes) {
    if (!seen.insert(c).second) {
      throw Error(ErrorCode::kInvalidMetadata, "duplicate class '" + c + "'");
    }
  }
}

FeatureMap parse_features(const nlohmann::json& jf, const std::string& ctx) {
  if (!jf.is_object()) {
    throw Error(ErrorCode::kInvalidMetadata, ctx + ": features must be an object");
  }
  FeatureMap out;
  for (const auto& [name, value] : jf.items()) {
    if (value.is_boolean()) {
      out.emplace(name, value.get<bool>());
    } else if (value.is_number()) {
      const double d = value.get<double>();
      if (!std::isfinite(d)) {
        throw Error(ErrorCode::kInvalidMetadata,
                    ctx + ": feature '" + name + "' is not finite");
      }
      out.emplace(name, d);
    } else if (value.is_string()) {
      out.emplace(name, value.get<std::string>());
    } else {
      throw Error(ErrorCode::kInvalidMetadata,
                  ctx + ": feature '" + name + "' must be a scalar or string");
    }
  }
  return out;
}

InstanceRecord parse_instance(const nlohmann::json& j, std::size_t index,
                              const std::vector<std::string>& classes,
                              const Bundle& bundle) {
  const std::string ctx = "instances.jsonl line " + std::to_string(index + 1);
  auto bad = [&](const std::string& what) -> Error {
    return Error(ErrorCode::kInvalidMetadata, ctx + ": " + what);
  };
  if (!j.is_object()) throw bad("expected an object");
  for (const char* key : {"id", "true_label", "predicted_label"}) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw bad(std::string("missing string field '") + key + "'");
    }
  }
  InstanceRecord r;
  r.index = index;
  r.id = j["id"].get<std::string>();
  r.true_label = j["true_label"].get<std::string>();
  r.predicted_label = j["predicted_label"].get<std::string>();
  try {
    r.true_class = bundle.class_index(r.true_label);
    r.predicted_class = bundle.class_index(r.predicted_label);
  } catch (const Error& e) {
    throw Error(e.code(), ctx + ": " + e.what());
  }

  if (!j.contains("scores") || !j["scores"].is_array()) {
    throw bad("'scores' must be an array");
  }
  for (const auto& s : j["scores"]) {
    if (!s.is_number()) throw bad("scores must be numbers");
    r.scores.push_back(s.get<double>());
    if (!std::isfinite(r.scores.back())) throw bad("non-finite score");
  }
  if (r.scores.size() != classes.size()) {
    throw bad("expected " + std::to_string(classes.size()) + " scores, got " +
              std::to_string(r.scores.size()));
  }
  if (argmax_class(r.scores) != r.predicted_class) {
    throw Error(ErrorCode::kPredictionMismatch,
                ctx + ": predicted_label '" + r.predicted_label +
                    "' is not the argmax of scores ('" +
                    classes[argmax_class(r.scores)] + "')");
  }

  const bool has_text = j.contains("text");
  const bool has_features = j.contains("features");
  if (has_text == has_features) {
    throw bad("exactly one of 'text' or 'features' is required");
  }
  if (has_text) {
    if (!j["text"].is_string()) throw bad("'text' must be a string");
    r.display = j["text"].get<std::string>();
  } else {
    r.display = parse_features(j["features"], ctx);
  }
  return r;
}

}  // namespace

Bundle load_bundle(const fs::path& dir) {
  for (const char* name : {"graph.json", "manifest.json", "instances.jsonl"}) {
    if (!fs::exists(dir / name)) {
      throw Error(ErrorCode::kMissingFile,
                  "bundle " + dir.string() + " has no " + name);
    }
  }

  Bundle bundle;
  bundle.graph = parse_graph(read_text(dir / "graph.json"));

  const Manifest manifest = parse_manifest(parse_json_file(dir / "manifest.json"));
  check_classes(manifest.classes);
  bundle.classes = manifest.classes;
  if (manifest.nodes.empty()) {
    throw Error(ErrorCode::kMissingFile, "manifest lists no activation dumps");
  }

  {
    std::ifstream in = open_input(dir / "instances.jsonl");
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kSyntaxError,
                    "instances.jsonl line " + std::to_string(line_no) + ": " +
                        e.what());
      }
      InstanceRecord r =
          parse_instance(j, bundle.instances.size(), bundle.classes, bundle);
      if (!ids.insert(r.id).second) {
        throw Error(ErrorCode::kInvalidMetadata,
                    "duplicate instance id '" + r.id + "'");
      }
      bundle.instances.push_back(std::move(r));
    }
  }
  if (bundle.instances.size() != manifest.n_instances) {
    throw Error(ErrorCode::kRowCountMismatch,
                "manifest declares " + std::to_string(manifest.n_instances) +
                    " instances, instances.jsonl holds " +
                    std::to_string(bundle.instances.size()));
  }

  for (const ManifestEntry& entry : manifest.nodes) {
    const GraphNode* node = bundle.graph.find(entry.id);
    if (node == nullptr || node->kind != NodeKind::kTensor ||
        !node->inspectable) {
      throw Error(ErrorCode::kUnknownNodeInManifest,
                  "manifest node '" + entry.id +
                      "' is not an inspectable tensor of the graph");
    }
    if (bundle.matrices.count(entry.id) != 0) {
      throw Error(ErrorCode::kUnknownNodeInManifest,
                  "manifest lists node '" + entry.id + "' twice");
    }
    const fs::path path = dir / entry.file;
    if (!fs::exists(path)) {
      throw Error(ErrorCode::kMissingFile, "missing dump " + path.string());
    }
    const DumpHeader header = read_dump_header(path);
    if (header.cols != entry.neurons) {
      throw Error(ErrorCode::kHeaderMismatch,
                  path.string() + ": header has " + std::to_string(header.cols) +
                      " columns, manifest says " +
                      std::to_string(entry.neurons));
    }
    if (header.rows != manifest.n_instances) {
      throw Error(ErrorCode::kHeaderMismatch,
                  path.string() + ": header has " + std::to_string(header.rows) +
                      " rows, manifest says " +
                      std::to_string(manifest.n_instances));
    }
    bundle.matrices.emplace(
        entry.id, read_activation_dump(path, entry.id, bundle.instances.size(),
                                       entry.neurons));
  }

  for (const GraphNode& node : bundle.graph.inspectable_nodes()) {
    if (bundle.matrices.count(node.id) == 0) {
      bundle.warnings.push_back("inspectable node '" + node.id +
                                "' has no activation dump");
    }
  }
  return bundle;
}

std::vector<float> activation_row(const Bundle& bundle, std::string_view node,
                                  std::size_t instance) {
  const ActivationMatrix& m = bundle.matrix(node);
  if (instance >= m.n_instances()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "instance " + std::to_string(instance) + " out of range [0, " +
                    std::to_string(m.n_instances()) + ")");
  }
  auto row = m.row(instance);
  return {row.begin(), row.end()};
}

}  // namespace neuroscope
