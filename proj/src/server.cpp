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

#include "neuroscope/server.hpp"

#include <sys/socket.h>

#include <utility>

#include "httplib.h"
#include "neuroscope/error.hpp"

namespace neuroscope {

struct Server::Http {
  httplib::Server server;
};

namespace {

ApiRequest to_api(const httplib::Request& req) {
  ApiRequest out;
  out.method = req.method;
  out.path = req.path;
  for (const auto& [key, value] : req.params) out.query.emplace(key, value);
  out.body = req.body;
  return out;
}

}  // namespace

Server::Server(std::shared_ptr<Session> session, const ServerOptions& options)
    : session_(std::move(session)), http_(std::make_unique<Http>()) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse out = session_->handle(to_api(req));
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  const char* kApi = R"(/api/.*)";
  http_->server.Get(kApi, forward);
  http_->server.Post(kApi, forward);
  http_->server.Delete(kApi, forward);
  if (options.static_dir) {
    http_->server.set_mount_point("/", *options.static_dir);
  }
  http_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes),
               sizeof yes);
  });

  if (options.port == 0) {
    port_ = http_->server.bind_to_any_port(options.host);
  } else if (http_->server.bind_to_port(options.host, options.port)) {
    port_ = options.port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) {
    throw Error(ErrorCode::kPortInUse,
                "cannot bind " + options.host + ":" + std::to_string(options.port));
  }
}

Server::~Server() {
  stop();
}

void Server::run() {
  http_->server.listen_after_bind();
}

void Server::start() {
  thread_ = std::thread([this] { http_->server.listen_after_bind(); });
  http_->server.wait_until_ready();
}

void Server::stop() {
  http_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace neuroscope
