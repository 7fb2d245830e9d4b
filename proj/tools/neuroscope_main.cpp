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

// neuroscope: command-line front end over the libneuroscope C API.
//
//   neuroscope ingest <dir>
//   neuroscope aggregate <dir> --node <id>
//   neuroscope project <dir> --node <id> [--perplexity P] [--seed S]
//   neuroscope serve <dir> [--port N]
//   neuroscope export <dir> --out <file>
//
// Failures exit 1 with {"error": "<Code>", "message": "..."} on stderr.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "neuroscope/neuroscope.h"

namespace {

struct BundleDeleter {
  void operator()(ns_bundle* b) const { ns_bundle_free(b); }
};
struct SessionDeleter {
  void operator()(ns_session* s) const { ns_session_free(s); }
};
struct ServerDeleter {
  void operator()(ns_server* s) const { ns_server_free(s); }
};
struct StringDeleter {
  void operator()(char* s) const { ns_string_free(s); }
};

using BundlePtr = std::unique_ptr<ns_bundle, BundleDeleter>;
using SessionPtr = std::unique_ptr<ns_session, SessionDeleter>;
using ServerPtr = std::unique_ptr<ns_server, ServerDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

class CommandFailed : public std::exception {
 public:
  explicit CommandFailed(ns_status status) : status_(status) {}
  ns_status status() const { return status_; }

 private:
  ns_status status_;
};

void check(ns_status status) {
  if (status != NS_OK) throw CommandFailed(status);
}

int report(const std::string& code, const std::string& message) {
  const nlohmann::json err = {{"error", code}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return 1;
}

BundlePtr load(const std::string& dir) {
  ns_bundle* raw = nullptr;
  check(ns_bundle_load(dir.c_str(), &raw));
  return BundlePtr(raw);
}

void emit(char* text) {
  StringPtr owned(text);
  std::fwrite(owned.get(), 1, std::char_traits<char>::length(owned.get()), stdout);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuron activation inspection engine"};
  app.require_subcommand(1);

  std::string dir;
  std::string node;
  std::string out_path;
  std::string host = "127.0.0.1";
  std::string static_dir;
  int port = -1;
  double perplexity = 30.0;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 1000;
  std::size_t budget = 1000;

  auto* ingest = app.add_subcommand("ingest", "Validate a bundle and print a summary");
  ingest->add_option("dir", dir, "Bundle directory")->required();

  auto* aggregate = app.add_subcommand("aggregate", "Print class-subset averages as CSV");
  aggregate->add_option("dir", dir, "Bundle directory")->required();
  aggregate->add_option("--node", node, "Tensor node id")->required();

  auto* project = app.add_subcommand("project", "Print t-SNE coordinates as CSV");
  project->add_option("dir", dir, "Bundle directory")->required();
  project->add_option("--node", node, "Tensor node id")->required();
  project->add_option("--perplexity", perplexity, "t-SNE perplexity")->capture_default_str();
  project->add_option("--seed", seed, "Random seed")->capture_default_str();
  project->add_option("--iterations", iterations, "Gradient steps")->capture_default_str();
  project->add_option("--budget", budget, "Sample size")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Serve the HTTP/JSON API");
  serve->add_option("dir", dir, "Bundle directory")->required();
  serve->add_option("--port", port, "Port (falls back to NEUROSCOPE_PORT, then 8080)");
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--static", static_dir, "Directory of UI assets served at /");

  auto* exporter = app.add_subcommand("export", "Write a static snapshot for offline use");
  exporter->add_option("dir", dir, "Bundle directory")->required();
  exporter->add_option("--out", out_path, "Output JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report("InvalidArgument", e.what());
  }

  try {
    if (ingest->parsed()) {
      BundlePtr bundle = load(dir);
      char* summary = nullptr;
      check(ns_bundle_summary(bundle.get(), &summary));
      emit(summary);
    } else if (aggregate->parsed()) {
      BundlePtr bundle = load(dir);
      char* csv = nullptr;
      check(ns_aggregate_csv(bundle.get(), node.c_str(), &csv));
      emit(csv);
    } else if (project->parsed()) {
      BundlePtr bundle = load(dir);
      ns_projection_config config;
      ns_projection_config_default(&config);
      config.perplexity = perplexity;
      config.seed = seed;
      config.iterations = iterations;
      if (config.exaggeration_iterations > iterations) {
        config.exaggeration_iterations = iterations;
      }
      char* csv = nullptr;
      check(ns_project_csv(bundle.get(), node.c_str(), &config, budget, seed, &csv));
      emit(csv);
    } else if (serve->parsed()) {
      if (port < 0) {
        const char* env = std::getenv("NEUROSCOPE_PORT");
        port = env != nullptr ? std::atoi(env) : 8080;
      }
      BundlePtr bundle = load(dir);
      ns_session* raw_session = nullptr;
      check(ns_session_create(bundle.get(), &raw_session));
      SessionPtr session(raw_session);
      ns_server* raw_server = nullptr;
      check(ns_server_create(session.get(), host.c_str(), port,
                             static_dir.empty() ? nullptr : static_dir.c_str(),
                             &raw_server));
      ServerPtr server(raw_server);
      std::cout << "serving on http://" << host << ":" << ns_server_port(server.get())
                << "/api" << std::endl;
      check(ns_server_run(server.get()));
    } else if (exporter->parsed()) {
      BundlePtr bundle = load(dir);
      ns_session* raw_session = nullptr;
      check(ns_session_create(bundle.get(), &raw_session));
      SessionPtr session(raw_session);
      char* raw_json = nullptr;
      check(ns_session_export(session.get(), &raw_json));
      StringPtr snapshot(raw_json);
      std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
      out << snapshot.get();
      if (!out) return report("IoError", "cannot write " + out_path);
    }
  } catch (const CommandFailed& e) {
    return report(ns_status_name(e.status()), ns_last_error());
  }
  return 0;
}
