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

#ifndef NEUROSCOPE_SERVER_HPP_
#define NEUROSCOPE_SERVER_HPP_

#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "neuroscope/session.hpp"

namespace neuroscope {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  // When set, files under this directory are served at "/".
  std::optional<std::string> static_dir;
};

// HTTP front end for a Session. Binds in the constructor (throws PortInUse),
// serves on run() or start().
class Server {
 public:
  Server(std::shared_ptr<Session> session, const ServerOptions& options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  int port() const { return port_; }
  Session& session() { return *session_; }

  void run();    // blocks until stop()
  void start();  // serves on a background thread
  void stop();

 private:
  struct Http;

  std::shared_ptr<Session> session_;
  std::unique_ptr<Http> http_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace neuroscope

#endif  // NEUROSCOPE_SERVER_HPP_
