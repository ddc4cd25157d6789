// Copyright 2026-present the vexbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

namespace vexbench {

/// In-process stand-in for the external search service. Speaks the same
/// wire protocol as RemoteBackend expects and answers searches with an
/// exact FlatIndex.
class StubServer {
 public:
  StubServer();
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws kConnection if the port is taken.
  int start(const std::string& host = "127.0.0.1", int port = 0);

  /// Binds and serves on the calling thread until stop() is called.
  void run(const std::string& host, int port);

  void stop();

  int port() const noexcept { return port_; }
  std::string url() const;

  /// Stored document count, or nullopt for an unknown index.
  std::optional<std::size_t> document_count(const std::string& index) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_ = "127.0.0.1";
  int port_ = 0;
};

}  // namespace vexbench
