/*
 * Copyright 2026 The Neuroscope Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libneuroscope.
 *
 * All objects are opaque handles released with their matching *_free
 * function. Every fallible call returns an ns_status; on failure the message
 * is available from ns_last_error() on the calling thread until the next
 * failing call. Strings returned through `char**` out-parameters are owned by
 * the caller and released with ns_string_free().
 */

#ifndef NEUROSCOPE_H_
#define NEUROSCOPE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(NEUROSCOPE_BUILDING_LIBRARY)
#define NS_API __declspec(dllexport)
#else
#define NS_API __declspec(dllimport)
#endif
#else
#define NS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ns_status {
  NS_OK = 0,
  NS_SYNTAX_ERROR = 1,
  NS_BIPARTITE_VIOLATION = 2,
  NS_CYCLE_DETECTED = 3,
  NS_DANGLING_EDGE = 4,
  NS_DUPLICATE_NODE_ID = 5,
  NS_UNKNOWN_NODE = 6,
  NS_MISSING_FILE = 7,
  NS_HEADER_MISMATCH = 8,
  NS_ROW_COUNT_MISMATCH = 9,
  NS_UNKNOWN_NODE_IN_MANIFEST = 10,
  NS_NON_FINITE_ACTIVATION = 11,
  NS_LABEL_OUTSIDE_CLASS_LIST = 12,
  NS_INVALID_METADATA = 13,
  NS_PREDICTION_MISMATCH = 14,
  NS_INDEX_OUT_OF_RANGE = 15,
  NS_UNKNOWN_FIELD = 16,
  NS_TYPE_MISMATCH = 17,
  NS_DUPLICATE_SUBSET_ID = 18,
  NS_UNKNOWN_SUBSET = 19,
  NS_MEMBER_INDEX_OUT_OF_RANGE = 20,
  NS_UNKNOWN_ROW = 21,
  NS_EMPTY_ANCHOR_ROW = 22,
  NS_DEGENERATE_INPUT = 23,
  NS_PERPLEXITY_INFEASIBLE = 24,
  NS_NON_FINITE_ENCOUNTERED = 25,
  NS_CANCELLED = 26,
  NS_UNKNOWN_PINNED_ID = 27,
  NS_BUDGET_TOO_SMALL = 28,
  NS_UNKNOWN_JOB = 29,
  NS_UNKNOWN_PIN = 30,
  NS_PORT_IN_USE = 31,
  NS_INVALID_ARGUMENT = 32,
  NS_IO_ERROR = 33,
  NS_INTERNAL = 34,
  NS_ROUTE_NOT_FOUND = 35
} ns_status;

typedef struct ns_bundle ns_bundle;
typedef struct ns_session ns_session;
typedef struct ns_server ns_server;

typedef struct ns_projection_config {
  double perplexity;
  uint64_t iterations;
  double early_exaggeration;
  uint64_t exaggeration_iterations;
  double learning_rate;
  uint64_t seed;
} ns_projection_config;

/* Machine-readable status name, e.g. "HeaderMismatch". Never NULL. */
NS_API const char* ns_status_name(ns_status status);
/* Message of the last failure on this thread; "" if none. */
NS_API const char* ns_last_error(void);
NS_API void ns_string_free(char* s);
NS_API const char* ns_version(void);

/* perplexity 30, 1000 iterations, exaggeration 4 for 250, rate 100, seed 0. */
NS_API void ns_projection_config_default(ns_projection_config* config);

/* ---- bundles ---------------------------------------------------------- */

NS_API ns_status ns_bundle_load(const char* dir, ns_bundle** out);
NS_API void ns_bundle_free(ns_bundle* bundle);
NS_API size_t ns_bundle_instance_count(const ns_bundle* bundle);
NS_API ns_status ns_bundle_summary(const ns_bundle* bundle, char** out_json);

/* Copies min(capacity, n_neurons) activations into `out`; `out_len` receives
 * n_neurons. Pass capacity 0 to query the length. */
NS_API ns_status ns_activation_row(const ns_bundle* bundle, const char* node,
                                   size_t instance, float* out, size_t capacity,
                                   size_t* out_len);

/* Default class-subset averages at `node` as CSV. */
NS_API ns_status ns_aggregate_csv(const ns_bundle* bundle, const char* node,
                                  char** out_csv);

/* t-SNE coordinates of a stratified sample (`sample_budget`, `sample_seed`)
 * at `node` as CSV. `config` may be NULL for defaults. */
NS_API ns_status ns_project_csv(const ns_bundle* bundle, const char* node,
                                const ns_projection_config* config,
                                size_t sample_budget, uint64_t sample_seed,
                                char** out_csv);

/* ---- sessions --------------------------------------------------------- */

/* The session shares the bundle; the bundle handle may be freed afterwards. */
NS_API ns_status ns_session_create(const ns_bundle* bundle, ns_session** out);
NS_API void ns_session_free(ns_session* session);

/* Answers one API request. `query` is "k=v&k2=v2" (percent-encoded) or NULL;
 * `body` may be NULL. API-level failures still return NS_OK with an error
 * status code and JSON error body. */
NS_API ns_status ns_session_request(ns_session* session, const char* method,
                                    const char* path, const char* query,
                                    const char* body, int* out_http_status,
                                    char** out_body);

NS_API ns_status ns_session_export(ns_session* session, char** out_json);

/* ---- HTTP server ------------------------------------------------------ */

/* Binds immediately; port 0 picks a free port. `host` NULL means 127.0.0.1,
 * `static_dir` NULL serves only /api. */
NS_API ns_status ns_server_create(ns_session* session, const char* host,
                                  int port, const char* static_dir,
                                  ns_server** out);
NS_API int ns_server_port(const ns_server* server);
/* Blocks until ns_server_stop() is called from another thread. */
NS_API ns_status ns_server_run(ns_server* server);
NS_API ns_status ns_server_start(ns_server* server);
NS_API void ns_server_stop(ns_server* server);
NS_API void ns_server_free(ns_server* server);

#ifdef __cplusplus
}
#endif

#endif /* NEUROSCOPE_H_ */
