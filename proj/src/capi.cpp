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

#include "neuroscope/neuroscope.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "neuroscope/activation_store.hpp"
#include "neuroscope/error.hpp"
#include "neuroscope/projection.hpp"
#include "neuroscope/reports.hpp"
#include "neuroscope/sampler.hpp"
#include "neuroscope/server.hpp"
#include "neuroscope/session.hpp"

struct ns_bundle {
  std::shared_ptr<const neuroscope::Bundle> bundle;
};

struct ns_session {
  std::shared_ptr<neuroscope::Session> session;
};

struct ns_server {
  std::unique_ptr<neuroscope::Server> server;
};

namespace {

using neuroscope::Error;
using neuroscope::ErrorCode;

thread_local std::string g_last_error;

ns_status fail(ErrorCode code, const std::string& message) {
  g_last_error = message;
  return static_cast<ns_status>(code);
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
ns_status guarded(F&& body) {
  try {
    body();
    return NS_OK;
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return fail(ErrorCode::kInternal, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool condition, const char* what) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, what);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out.push_back(' ');
    } else if (s[i] == '%' && i + 2 < s.size() && hex_value(s[i + 1]) >= 0 &&
               hex_value(s[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(s[i + 1]) * 16 + hex_value(s[i + 2])));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

neuroscope::ProjectionConfig to_config(const ns_projection_config* c) {
  neuroscope::ProjectionConfig out;
  if (c == nullptr) return out;
  out.perplexity = c->perplexity;
  out.iterations = c->iterations;
  out.early_exaggeration = c->early_exaggeration;
  out.exaggeration_iterations = c->exaggeration_iterations;
  out.learning_rate = c->learning_rate;
  out.momentum_switch_iteration = c->exaggeration_iterations;
  out.seed = c->seed;
  return out;
}

}  // namespace

extern "C" {

const char* ns_status_name(ns_status status) {
  return neuroscope::error_code_name(static_cast<ErrorCode>(status)).data();
}

const char* ns_last_error(void) { return g_last_error.c_str(); }

void ns_string_free(char* s) { std::free(s); }

const char* ns_version(void) { return "0.1.0"; }

void ns_projection_config_default(ns_projection_config* config) {
  if (config == nullptr) return;
  const neuroscope::ProjectionConfig d;
  config->perplexity = d.perplexity;
  config->iterations = d.iterations;
  config->early_exaggeration = d.early_exaggeration;
  config->exaggeration_iterations = d.exaggeration_iterations;
  config->learning_rate = d.learning_rate;
  config->seed = d.seed;
}

ns_status ns_bundle_load(const char* dir, ns_bundle** out) {
  return guarded([&] {
    require(dir != nullptr && out != nullptr, "ns_bundle_load: null argument");
    auto handle = std::make_unique<ns_bundle>();
    handle->bundle = std::make_shared<const neuroscope::Bundle>(neuroscope::load_bundle(dir));
    *out = handle.release();
  });
}

void ns_bundle_free(ns_bundle* bundle) { delete bundle; }

size_t ns_bundle_instance_count(const ns_bundle* bundle) {
  return bundle == nullptr ? 0 : bundle->bundle->n_instances();
}

ns_status ns_bundle_summary(const ns_bundle* bundle, char** out_json) {
  return guarded([&] {
    require(bundle != nullptr && out_json != nullptr, "ns_bundle_summary: null argument");
    *out_json = dup_string(neuroscope::bundle_summary(*bundle->bundle));
  });
}

ns_status ns_activation_row(const ns_bundle* bundle, const char* node, size_t instance,
                            float* out, size_t capacity, size_t* out_len) {
  return guarded([&] {
    require(bundle != nullptr && node != nullptr, "ns_activation_row: null argument");
    require(capacity == 0 || out != nullptr, "ns_activation_row: null output buffer");
    const auto row = neuroscope::activation_row(*bundle->bundle, node, instance);
    std::copy_n(row.begin(), std::min(capacity, row.size()), out);
    if (out_len != nullptr) *out_len = row.size();
  });
}

ns_status ns_aggregate_csv(const ns_bundle* bundle, const char* node, char** out_csv) {
  return guarded([&] {
    require(bundle != nullptr && node != nullptr && out_csv != nullptr,
            "ns_aggregate_csv: null argument");
    *out_csv = dup_string(neuroscope::aggregate_csv(*bundle->bundle, node));
  });
}

ns_status ns_project_csv(const ns_bundle* bundle, const char* node,
                         const ns_projection_config* config, size_t sample_budget,
                         uint64_t sample_seed, char** out_csv) {
  return guarded([&] {
    require(bundle != nullptr && node != nullptr && out_csv != nullptr,
            "ns_project_csv: null argument");
    neuroscope::SampleSpec spec;
    spec.budget = sample_budget;
    spec.seed = sample_seed;
    const auto sample = neuroscope::draw_sample(*bundle->bundle, spec);
    const auto result =
        neuroscope::project_node(*bundle->bundle, node, sample, to_config(config));
    *out_csv = dup_string(neuroscope::projection_csv(result));
  });
}

ns_status ns_session_create(const ns_bundle* bundle, ns_session** out) {
  return guarded([&] {
    require(bundle != nullptr && out != nullptr, "ns_session_create: null argument");
    auto handle = std::make_unique<ns_session>();
    handle->session = std::make_shared<neuroscope::Session>(bundle->bundle);
    *out = handle.release();
  });
}

void ns_session_free(ns_session* session) { delete session; }

ns_status ns_session_request(ns_session* session, const char* method, const char* path,
                             const char* query, const char* body, int* out_http_status,
                             char** out_body) {
  return guarded([&] {
    require(session != nullptr && method != nullptr && path != nullptr &&
                out_http_status != nullptr && out_body != nullptr,
            "ns_session_request: null argument");
    neuroscope::ApiRequest req;
    req.method = method;
    req.path = path;
    req.body = body == nullptr ? "" : body;
    if (query != nullptr) {
      std::string_view q(query);
      while (!q.empty()) {
        const std::size_t amp = q.find('&');
        const std::string_view pair = q.substr(0, amp);
        const std::size_t eq = pair.find('=');
        if (!pair.empty()) {
          req.query.emplace(percent_decode(pair.substr(0, eq)),
                            eq == std::string_view::npos ? std::string()
                                                         : percent_decode(pair.substr(eq + 1)));
        }
        q = amp == std::string_view::npos ? std::string_view() : q.substr(amp + 1);
      }
    }
    const neuroscope::ApiResponse res = session->session->handle(req);
    *out_body = dup_string(res.body);
    *out_http_status = res.status;
  });
}

ns_status ns_session_export(ns_session* session, char** out_json) {
  return guarded([&] {
    require(session != nullptr && out_json != nullptr, "ns_session_export: null argument");
    *out_json = dup_string(session->session->export_snapshot());
  });
}

ns_status ns_server_create(ns_session* session, const char* host, int port,
                           const char* static_dir, ns_server** out) {
  return guarded([&] {
    require(session != nullptr && out != nullptr, "ns_server_create: null argument");
    require(port >= 0 && port <= 65535, "ns_server_create: port out of range");
    neuroscope::ServerOptions options;
    if (host != nullptr) options.host = host;
    options.port = port;
    if (static_dir != nullptr) options.static_dir = static_dir;
    auto handle = std::make_unique<ns_server>();
    handle->server = std::make_unique<neuroscope::Server>(session->session, options);
    *out = handle.release();
  });
}

int ns_server_port(const ns_server* server) {
  return server == nullptr ? -1 : server->server->port();
}

ns_status ns_server_run(ns_server* server) {
  return guarded([&] {
    require(server != nullptr, "ns_server_run: null server");
    server->server->run();
  });
}

ns_status ns_server_start(ns_server* server) {
  return guarded([&] {
    require(server != nullptr, "ns_server_start: null server");
    server->server->start();
  });
}

void ns_server_stop(ns_server* server) {
  if (server != nullptr) server->server->stop();
}

void ns_server_free(ns_server* server) { delete server; }

}  // extern "C"
