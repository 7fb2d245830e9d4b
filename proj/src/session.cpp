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

#include "neuroscope/session.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <stop_token>
#include <thread>
#include <utility>

#include "json_codec.hpp"
#include "neuroscope/error.hpp"

namespace neuroscope {

using nlohmann::json;

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t hash_sample(const std::vector<std::size_t>& sample) {
  std::uint64_t h = kFnvOffset;
  for (std::size_t i : sample) {
    const std::uint64_t v = i;
    h = fnv1a(std::string_view(reinterpret_cast<const char*>(&v), sizeof v), h);
  }
  return h;
}

json config_to_json(const ProjectionConfig& c) {
  return {{"perplexity", c.perplexity},
          {"iterations", c.iterations},
          {"early_exaggeration", c.early_exaggeration},
          {"exaggeration_iterations", c.exaggeration_iterations},
          {"learning_rate", c.learning_rate},
          {"initial_momentum", c.initial_momentum},
          {"final_momentum", c.final_momentum},
          {"momentum_switch_iteration", c.momentum_switch_iteration},
          {"seed", c.seed}};
}

Error bad_request(const std::string& what) {
  return Error(ErrorCode::kInvalidArgument, what);
}

template <typename T>
T field_or(const json& body, const char* key, T fallback) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw bad_request(std::string("field '") + key + "' has the wrong type");
  }
}

ProjectionConfig config_from_json(const json& body) {
  ProjectionConfig c;
  if (!body.is_object()) return c;
  const json& cfg = body.contains("config") ? body["config"] : body;
  if (!cfg.is_object()) throw bad_request("'config' must be an object");
  c.perplexity = field_or(cfg, "perplexity", c.perplexity);
  c.iterations = field_or(cfg, "iterations", c.iterations);
  c.early_exaggeration = field_or(cfg, "early_exaggeration", c.early_exaggeration);
  c.exaggeration_iterations =
      field_or(cfg, "exaggeration_iterations", c.exaggeration_iterations);
  c.learning_rate = field_or(cfg, "learning_rate", c.learning_rate);
  c.initial_momentum = field_or(cfg, "initial_momentum", c.initial_momentum);
  c.final_momentum = field_or(cfg, "final_momentum", c.final_momentum);
  c.momentum_switch_iteration =
      field_or(cfg, "momentum_switch_iteration", c.momentum_switch_iteration);
  c.seed = field_or(cfg, "seed", c.seed);
  return c;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownNode:
    case ErrorCode::kUnknownSubset:
    case ErrorCode::kUnknownJob:
    case ErrorCode::kUnknownPin:
    case ErrorCode::kIndexOutOfRange:
    case ErrorCode::kRouteNotFound:
      return 404;
    case ErrorCode::kDuplicateSubsetId:
      return 409;
    case ErrorCode::kInternal:
    case ErrorCode::kIoError:
      return 500;
    default:
      return 400;
  }
}

ApiResponse error_response(const Error& e) {
  json body = {{"code", error_code_name(e.code())}, {"message", e.what()}};
  if (e.position()) body["position"] = *e.position();
  return {http_status(e.code()), body.dump()};
}

ApiResponse ok(const json& body, int status = 200) {
  return {status, body.dump()};
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    const std::size_t start = i;
    while (i < path.size() && path[i] != '/') ++i;
    if (i > start) parts.emplace_back(path.substr(start, i - start));
  }
  return parts;
}

std::size_t parse_index(const std::string& text) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kIndexOutOfRange, "'" + text + "' is not an instance index");
  }
  return value;
}

std::size_t json_index(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_number_unsigned()) {
    throw bad_request(std::string("field '") + key + "' must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

std::string json_string(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw bad_request(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

json parse_body(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSyntaxError, std::string("request body: ") + e.what(), e.byte);
  }
}

json view_to_json(const SubsetActivationMatrix& view,
                  const std::vector<std::size_t>& column_order) {
  json keys = json::array();
  for (const RowKey& k : view.row_keys) keys.push_back(k.to_string());
  json values = json::array();
  for (std::size_t r = 0; r < view.n_rows(); ++r) values.push_back(num9_array(view.row(r)));
  return {{"node", view.node_id},
          {"n_neurons", view.n_neurons},
          {"row_keys", std::move(keys)},
          {"row_counts", view.row_counts},
          {"values", std::move(values)},
          {"empty_rows", view.empty_rows},
          {"column_order", column_order}};
}

json subset_to_json(const SubsetDefinition& d, std::size_t count) {
  std::string predicate;
  try {
    predicate = print_predicate(d.predicate);
  } catch (const Error&) {
    predicate = "";
  }
  return {{"id", d.subset_id},
          {"name", d.name},
          {"predicate", predicate},
          {"kind", d.kind == SubsetKind::kClassDefault ? "class" : "user"},
          {"count", count}};
}

json panel_to_json(const InstancePanel& panel) {
  json groups = json::array();
  for (const PanelGroup& g : panel.groups) {
    groups.push_back({{"class", g.class_name},
                      {"correct", g.correct},
                      {"misclassified", g.misclassified}});
  }
  return {{"groups", std::move(groups)}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Projection jobs

struct Session::Job {
  enum class Status { kRunning, kDone, kFailed, kCancelled };

  std::string id;
  std::string node;
  std::mutex mutex;
  std::condition_variable done_cv;
  Status status = Status::kRunning;
  std::optional<ProjectionResult> result;
  std::string error_code;
  std::string error_message;
  std::stop_source stop;
  std::jthread worker;
};

struct Session::Impl {
  std::mutex jobs_mutex;
  std::map<std::string, std::shared_ptr<Job>> jobs;      // by id
  std::map<std::string, std::string> job_by_key;         // cache key -> id
  std::map<std::string, std::shared_ptr<std::mutex>> node_locks;
  std::size_t next_job = 1;

  std::shared_ptr<std::mutex> node_lock(const std::string& node) {
    auto& slot = node_locks[node];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
  }
};

namespace {

std::string_view status_name(Session::Job& job) {
  using S = Session::Job::Status;
  switch (job.status) {
    case S::kRunning: return "running";
    case S::kDone: return "done";
    case S::kFailed: return "failed";
    case S::kCancelled: return "cancelled";
  }
  return "failed";
}

json job_to_json(Session::Job& job) {
  std::lock_guard lock(job.mutex);
  json out = {{"job_id", job.id}, {"node", job.node}, {"status", status_name(job)}};
  if (job.result) {
    json coords = json::array();
    const auto& c = job.result->coords;
    for (std::size_t i = 0; i + 1 < c.size(); i += 2) {
      coords.push_back({num9(c[i]), num9(c[i + 1])});
    }
    out["coords"] = std::move(coords);
    out["point_ids"] = job.result->point_ids;
    out["kl_final"] = num9(job.result->kl_final());
  }
  if (!job.error_code.empty()) {
    out["error"] = {{"code", job.error_code}, {"message", job.error_message}};
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Session

Session::Session(std::shared_ptr<const Bundle> bundle, SampleSpec initial_sample)
    : bundle_(std::move(bundle)),
      registry_(bundle_, default_class_subsets(*bundle_)),
      impl_(std::make_unique<Impl>()) {
  sample_ = draw_sample(*bundle_, initial_sample);
}

Session::~Session() {
  std::map<std::string, std::shared_ptr<Job>> jobs;
  {
    std::lock_guard lock(impl_->jobs_mutex);
    jobs.swap(impl_->jobs);
  }
  for (auto& [id, job] : jobs) job->stop.request_stop();
  for (auto& [id, job] : jobs) {
    if (job->worker.joinable()) job->worker.join();
  }
}

std::vector<std::size_t> Session::sample() const {
  std::shared_lock lock(state_mutex_);
  return sample_;
}

SubsetActivationMatrix Session::matrix_view(const std::string& node) const {
  bundle_->matrix(node);
  auto snap = registry_.snapshot();
  std::vector<std::size_t> pins;
  {
    std::shared_lock lock(state_mutex_);
    if (auto it = pins_.find(node); it != pins_.end()) pins = it->second;
  }
  return assemble_view(*bundle_, node, snap->membership, snap->membership.subsets,
                       pins);
}

bool Session::wait_for_job(const std::string& job_id, double timeout_seconds) {
  std::shared_ptr<Job> job;
  {
    std::lock_guard lock(impl_->jobs_mutex);
    auto it = impl_->jobs.find(job_id);
    if (it == impl_->jobs.end()) {
      throw Error(ErrorCode::kUnknownJob, "unknown job '" + job_id + "'");
    }
    job = it->second;
  }
  std::unique_lock lock(job->mutex);
  return job->done_cv.wait_for(lock, std::chrono::duration<double>(timeout_seconds),
                               [&] { return job->status != Job::Status::kRunning; });
}

std::string Session::export_snapshot() {
  auto snap = registry_.snapshot();
  const std::vector<std::size_t> current = sample();

  json nodes = json::array();
  json matrices = json::object();
  for (const GraphNode& node : bundle_->graph.inspectable_nodes()) {
    const bool has = bundle_->matrices.count(node.id) != 0;
    nodes.push_back({{"id", node.id},
                     {"name", node.display_name},
                     {"has_activations", has},
                     {"neurons", has ? bundle_->matrix(node.id).n_neurons() : 0}});
    if (has) {
      SubsetActivationMatrix view = matrix_view(node.id);
      std::vector<std::size_t> identity(view.n_neurons);
      std::iota(identity.begin(), identity.end(), 0);
      matrices[node.id] = view_to_json(view, identity);
    }
  }
  json subsets = json::array();
  for (std::size_t k = 0; k < snap->definitions.size(); ++k) {
    json s = subset_to_json(snap->definitions[k], snap->membership.count(k));
    s["members"] = snap->membership.members[k];
    subsets.push_back(std::move(s));
  }
  json instances = json::array();
  for (std::size_t i : current) instances.push_back(record_to_json(bundle_->instances[i]));

  json out = {{"graph", graph_to_json(bundle_->graph)},
              {"classes", bundle_->classes},
              {"nodes", std::move(nodes)},
              {"subsets", std::move(subsets)},
              {"sample", current},
              {"instances", std::move(instances)},
              {"panel", panel_to_json(build_panel(*bundle_, current))},
              {"matrices", std::move(matrices)}};
  return out.dump(1) + "\n";
}

ApiResponse Session::handle(const ApiRequest& req) {
  try {
    const std::vector<std::string> p = split_path(req.path);
    const std::string& m = req.method;
    const std::size_t n = p.size();
    auto route_error = [&] {
      return Error(ErrorCode::kRouteNotFound, "no route for " + m + " " + req.path);
    };
    if (n == 0 || p[0] != "api") throw route_error();

    // GET /api/graph
    if (n == 2 && p[1] == "graph" && m == "GET") {
      return ok(graph_to_json(bundle_->graph));
    }

    // GET /api/nodes
    if (n == 2 && p[1] == "nodes" && m == "GET") {
      json out = json::array();
      for (const GraphNode& node : bundle_->graph.inspectable_nodes()) {
        const bool has = bundle_->matrices.count(node.id) != 0;
        out.push_back({{"id", node.id},
                       {"name", node.display_name},
                       {"has_activations", has},
                       {"neurons", has ? bundle_->matrix(node.id).n_neurons() : 0}});
      }
      return ok(out);
    }

    if (n >= 3 && p[1] == "nodes") {
      const std::string& node = p[2];
      // GET /api/nodes/{id}/matrix?sort_by=row_key
      if (n == 4 && p[3] == "matrix" && m == "GET") {
        const SubsetActivationMatrix view = matrix_view(node);
        std::vector<std::size_t> order(view.n_neurons);
        std::iota(order.begin(), order.end(), 0);
        if (auto it = req.query.find("sort_by"); it != req.query.end()) {
          const auto key = RowKey::parse(it->second);
          if (!key) {
            throw Error(ErrorCode::kUnknownRow, "malformed row key '" + it->second + "'");
          }
          order = sort_columns(view, *key).permutation;
        }
        return ok(view_to_json(view, order));
      }
      // GET /api/nodes/{id}/instance_row/{index}
      if (n == 5 && p[3] == "instance_row" && m == "GET") {
        const std::size_t index = parse_index(p[4]);
        const std::vector<float> row = activation_row(*bundle_, node, index);
        return ok({{"node", node},
                   {"index", index},
                   {"values", num9_array(std::span<const float>(row))}});
      }
      // POST /api/nodes/{id}/projection
      if (n == 4 && p[3] == "projection" && m == "POST") {
        return start_projection(node, req.body);
      }
    }

    // GET|DELETE /api/projections/{job_id}
    if (n == 3 && p[1] == "projections") {
      std::shared_ptr<Job> job;
      {
        std::lock_guard lock(impl_->jobs_mutex);
        auto it = impl_->jobs.find(p[2]);
        if (it == impl_->jobs.end()) {
          throw Error(ErrorCode::kUnknownJob, "unknown job '" + p[2] + "'");
        }
        job = it->second;
      }
      if (m == "GET") return ok(job_to_json(*job));
      if (m == "DELETE") {
        job->stop.request_stop();
        return ok({{"job_id", job->id}, {"cancel_requested", true}});
      }
    }

    // /api/subsets
    if (n == 2 && p[1] == "subsets") {
      if (m == "GET") {
        auto snap = registry_.snapshot();
        json out = json::array();
        for (std::size_t k = 0; k < snap->definitions.size(); ++k) {
          out.push_back(subset_to_json(snap->definitions[k], snap->membership.count(k)));
        }
        return ok(out);
      }
      if (m == "POST") {
        const json body = parse_body(req.body);
        const std::string predicate = json_string(body, "predicate");
        const std::string name = field_or<std::string>(body, "name", "");
        std::string id;
        {
          std::unique_lock lock(state_mutex_);
          id = registry_.add(name, predicate);
        }
        auto snap = registry_.snapshot();
        const std::size_t k = snap->membership.find(id);
        json out = subset_to_json(snap->definitions[k], snap->membership.count(k));
        out["row"] = k;
        return ok(out, 201);
      }
    }
    if (n == 3 && p[1] == "subsets" && m == "DELETE") {
      {
        std::unique_lock lock(state_mutex_);
        registry_.remove(p[2]);
      }
      return ok({{"deleted", p[2]}});
    }
    // GET /api/subsets/{id}/members
    if (n == 4 && p[1] == "subsets" && p[3] == "members" && m == "GET") {
      auto snap = registry_.snapshot();
      const std::size_t k = snap->membership.find(p[2]);
      if (k == std::string_view::npos) {
        throw Error(ErrorCode::kUnknownSubset, "unknown subset '" + p[2] + "'");
      }
      return ok({{"id", p[2]}, {"members", snap->membership.members[k]}});
    }

    // GET /api/panel
    if (n == 2 && p[1] == "panel" && m == "GET") {
      return ok(panel_to_json(build_panel(*bundle_, sample())));
    }

    // GET /api/instances/{index}
    if (n == 3 && p[1] == "instances" && m == "GET") {
      const std::size_t index = parse_index(p[2]);
      if (index >= bundle_->n_instances()) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "instance " + std::to_string(index) + " out of range");
      }
      return ok(record_to_json(bundle_->instances[index]));
    }

    // POST|DELETE /api/pins {node, instance}
    if (n == 2 && p[1] == "pins" && (m == "POST" || m == "DELETE")) {
      const json body = parse_body(req.body);
      const std::string node = json_string(body, "node");
      const std::size_t index = json_index(body, "instance");
      const ActivationMatrix& a = bundle_->matrix(node);
      if (index >= a.n_instances()) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "instance " + std::to_string(index) + " out of range");
      }
      std::unique_lock lock(state_mutex_);
      std::vector<std::size_t>& pins = pins_[node];
      if (m == "POST") {
        pins.push_back(index);
      } else {
        auto it = std::find(pins.begin(), pins.end(), index);
        if (it == pins.end()) {
          throw Error(ErrorCode::kUnknownPin, "instance " + std::to_string(index) +
                                                  " is not pinned at '" + node + "'");
        }
        pins.erase(it);
      }
      return ok({{"node", node}, {"pins", pins}});
    }

    // GET|POST /api/sample
    if (n == 2 && p[1] == "sample") {
      if (m == "GET") return ok({{"sample", sample()}});
      if (m == "POST") {
        const json body = parse_body(req.body);
        if (!body.is_object()) throw bad_request("body must be an object");
        SampleSpec spec;
        spec.budget = field_or(body, "budget", spec.budget);
        spec.seed = field_or(body, "seed", spec.seed);
        spec.pinned = field_or(body, "pinned", spec.pinned);
        std::vector<std::size_t> drawn = draw_sample(*bundle_, spec);
        std::unique_lock lock(state_mutex_);
        sample_ = std::move(drawn);
        return ok({{"sample", sample_}});
      }
    }

    throw route_error();
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return error_response(Error(ErrorCode::kInternal, e.what()));
  }
}

ApiResponse Session::start_projection(const std::string& node,
                                      const std::string& body) {
  bundle_->matrix(node);
  const ProjectionConfig config = config_from_json(parse_body(body));
  const std::vector<std::size_t> points = sample();
  validate_config(config, points.size());

  const std::string key = node + "\n" + hex64(hash_sample(points)) + "\n" +
                          hex64(fnv1a(config_to_json(config).dump()));
  std::lock_guard lock(impl_->jobs_mutex);
  if (auto it = impl_->job_by_key.find(key); it != impl_->job_by_key.end()) {
    const std::shared_ptr<Job>& existing = impl_->jobs.at(it->second);
    std::lock_guard job_lock(existing->mutex);
    if (existing->status == Job::Status::kRunning ||
        existing->status == Job::Status::kDone) {
      return ok({{"job_id", existing->id}, {"coalesced", true}}, 202);
    }
  }

  auto job = std::make_shared<Job>();
  job->id = "job-" + std::to_string(impl_->next_job++);
  job->node = node;
  impl_->jobs[job->id] = job;
  impl_->job_by_key[key] = job->id;

  std::shared_ptr<std::mutex> node_lock = impl_->node_lock(node);
  std::shared_ptr<const Bundle> bundle = bundle_;
  Job* raw = job.get();
  job->worker = std::jthread([raw, node_lock, bundle, node, points, config,
                              stop = job->stop.get_token()] {
    std::optional<ProjectionResult> result;
    std::string code;
    std::string message;
    Job::Status status = Job::Status::kDone;
    try {
      std::lock_guard node_guard(*node_lock);
      result = project_node(*bundle, node, points, config, stop);
    } catch (const Error& e) {
      status = e.code() == ErrorCode::kCancelled ? Job::Status::kCancelled
                                                 : Job::Status::kFailed;
      code = error_code_name(e.code());
      message = e.what();
    } catch (const std::exception& e) {
      status = Job::Status::kFailed;
      code = error_code_name(ErrorCode::kInternal);
      message = e.what();
    }
    {
      std::lock_guard job_lock(raw->mutex);
      raw->result = std::move(result);
      raw->status = status;
      raw->error_code = std::move(code);
      raw->error_message = std::move(message);
    }
    raw->done_cv.notify_all();
  });
  return ok({{"job_id", job->id}, {"coalesced", false}}, 202);
}

}  // namespace neuroscope
