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

// Session state behind the HTTP API: one bundle, its subset registry, the
// working sample, per-node pinned rows, and asynchronous projection jobs.
//
// Every /api endpoint is answered by Session::handle, which is independent of
// any transport; Server only adapts HTTP requests onto it.

#ifndef NEUROSCOPE_SESSION_HPP_
#define NEUROSCOPE_SESSION_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "neuroscope/activation_store.hpp"
#include "neuroscope/aggregation.hpp"
#include "neuroscope/projection.hpp"
#include "neuroscope/sampler.hpp"
#include "neuroscope/subset.hpp"

namespace neuroscope {

struct ApiRequest {
  std::string method;  // "GET", "POST", "DELETE"
  std::string path;    // decoded, e.g. "/api/nodes/fc_out/matrix"
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

class Session {
 public:
  explicit Session(std::shared_ptr<const Bundle> bundle,
                   SampleSpec initial_sample = {});
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  ApiResponse handle(const ApiRequest& request);

  // Offline snapshot: graph, inspectable nodes, subsets, sample, panel and the
  // default matrix view of every node with activations.
  std::string export_snapshot();

  const Bundle& bundle() const { return *bundle_; }
  std::vector<std::size_t> sample() const;
  std::shared_ptr<const SubsetRegistry::Snapshot> subsets() const {
    return registry_.snapshot();
  }
  // Subset rows (registry order) plus this node's pinned instance rows.
  SubsetActivationMatrix matrix_view(const std::string& node) const;

  // Blocks until the job leaves the running state; for callers without a
  // polling loop (CLI, tests). Returns false on timeout.
  bool wait_for_job(const std::string& job_id, double timeout_seconds);

  struct Job;

 private:
  struct Impl;

  ApiResponse start_projection(const std::string& node, const std::string& body);

  std::shared_ptr<const Bundle> bundle_;
  SubsetRegistry registry_;
  mutable std::shared_mutex state_mutex_;  // sample_, pins_
  std::vector<std::size_t> sample_;
  std::map<std::string, std::vector<std::size_t>> pins_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace neuroscope

#endif  // NEUROSCOPE_SESSION_HPP_
