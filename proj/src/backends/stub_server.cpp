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
#include "vexbench/stub_server.hpp"

#include <map>
#include <mutex>
#include <thread>
#include <unordered_set>

#include <httplib.h>

#include "vexbench/flat_index.hpp"
#include "vexbench/remote.hpp"
#include "wire.hpp"

namespace vexbench {
namespace {

using nlohmann::json;

struct StoredIndex {
  explicit StoredIndex(std::size_t dim) : dim(dim), building(dim) {}

  std::size_t dim;
  FlatIndex building;
  std::shared_ptr<const FlatIndex> snapshot;
};

struct BadRequest {
  int status;
  std::string message;
};

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw BadRequest{400, "request body is not a JSON object"};
  return body;
}

std::size_t positive_int(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_number_unsigned() || body[key].get<std::size_t>() == 0) {
    throw BadRequest{400, std::string("'") + key + "' must be a positive integer"};
  }
  return body[key].get<std::size_t>();
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

struct StubServer::Impl {
  httplib::Server server;
  std::thread worker;
  mutable std::mutex mutex;
  std::map<std::string, std::shared_ptr<StoredIndex>> indices;

  std::shared_ptr<StoredIndex> lookup(const std::string& name) const {
    std::lock_guard lock(mutex);
    const auto it = indices.find(name);
    if (it == indices.end()) throw BadRequest{404, "unknown index '" + name + "'"};
    return it->second;
  }

  void create(const std::string& name, const json& body) {
    const std::size_t dim = positive_int(body, "dim");
    std::lock_guard lock(mutex);
    indices[name] = std::make_shared<StoredIndex>(dim);
  }

  std::size_t bulk(const std::string& name, const json& body) {
    if (!body.contains("docs") || !body["docs"].is_array()) {
      throw BadRequest{400, "'docs' must be an array"};
    }
    std::vector<Document> docs;
    docs.reserve(body["docs"].size());
    for (const auto& d : body["docs"]) {
      if (!d.is_object() || !d.contains("id") || !d["id"].is_number_integer() ||
          !d.contains("embedding")) {
        throw BadRequest{400, "each doc needs an integer 'id' and an 'embedding'"};
      }
      docs.push_back({d["id"].get<DocId>(), wire::embedding_from_json(d["embedding"])});
    }

    const std::shared_ptr<StoredIndex> stored = lookup(name);
    std::lock_guard lock(mutex);
    // Validate the whole batch first so a rejected request stores nothing.
    std::unordered_set<DocId> batch_ids;
    for (const auto& d : docs) {
      if (d.embedding.dim() != stored->dim) {
        throw BadRequest{400, "document " + std::to_string(d.id) + " has dimension " +
                                  std::to_string(d.embedding.dim()) + ", index expects " +
                                  std::to_string(stored->dim)};
      }
      if (stored->building.contains(d.id) || !batch_ids.insert(d.id).second) {
        throw BadRequest{400, "duplicate document id " + std::to_string(d.id)};
      }
      if (norm(d.embedding) == 0.0) {
        throw BadRequest{400, "document " + std::to_string(d.id) + " has zero norm"};
      }
    }
    stored->building.add(docs);
    stored->snapshot.reset();
    return docs.size();
  }

  json search(const std::string& name, const json& body) {
    if (!body.contains("embedding")) throw BadRequest{400, "'embedding' is required"};
    const Embedding query = wire::embedding_from_json(body["embedding"]);
    const std::size_t k = positive_int(body, "k");

    const std::shared_ptr<StoredIndex> stored = lookup(name);
    std::shared_ptr<const FlatIndex> snapshot;
    {
      std::lock_guard lock(mutex);
      if (!stored->snapshot) {
        auto sealed = std::make_shared<FlatIndex>(stored->building);
        sealed->seal();
        stored->snapshot = std::move(sealed);
      }
      snapshot = stored->snapshot;
    }
    if (query.dim() != snapshot->dim()) {
      throw BadRequest{400, "query has dimension " + std::to_string(query.dim()) +
                                ", index expects " + std::to_string(snapshot->dim())};
    }

    json hits = json::array();
    if (snapshot->size() > 0) {
      for (const auto& h : snapshot->search_topk(query, k).hits) {
        hits.push_back({{"id", h.id}, {"score", h.score + kWireScoreShift}});
      }
    }
    return json{{"hits", std::move(hits)}};
  }

  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const BadRequest& e) {
        res.status = e.status;
        res.set_content(wire::error_body(e.message), "application/json");
      } catch (const Error& e) {
        res.status = 400;
        res.set_content(wire::error_body(e.what()), "application/json");
      }
    };
  }

  void install_routes() {
    // httplib defaults to SO_REUSEPORT, which lets a second stub share a
    // busy port silently. Plain SO_REUSEADDR still allows quick restarts.
    server.set_socket_options([](auto sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server.Put(R"(/index/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 create(req.matches[1], parse_body(req));
                 reply(res, 200, json{{"acknowledged", true}});
               }));
    server.Post(R"(/index/([^/]+)/bulk)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  reply(res, 200, json{{"indexed", bulk(req.matches[1], parse_body(req))}});
                }));
    server.Post(R"(/index/([^/]+)/search)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  reply(res, 200, search(req.matches[1], parse_body(req)));
                }));
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string message = "internal error";
          try {
            std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            message = e.what();
          } catch (...) {
          }
          res.status = 500;
          res.set_content(wire::error_body(message), "application/json");
        });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (res.body.empty()) {
        res.set_content(wire::error_body("no route for " + req.method + " " + req.path),
                        "application/json");
      }
    });
  }
};

StubServer::StubServer() : impl_(std::make_unique<Impl>()) { impl_->install_routes(); }

StubServer::~StubServer() { stop(); }

int StubServer::start(const std::string& host, int port) {
  host_ = host;
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    if (port_ < 0) throw Error(ErrorCode::kConnection, "cannot bind any port on " + host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      throw Error(ErrorCode::kConnection,
                  "cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
    }
    port_ = port;
  }
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void StubServer::run(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kConnection,
                "cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
  }
  host_ = host;
  port_ = port;
  impl_->server.listen_after_bind();
}

void StubServer::stop() {
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

std::string StubServer::url() const { return "http://" + host_ + ":" + std::to_string(port_); }

std::optional<std::size_t> StubServer::document_count(const std::string& index) const {
  std::lock_guard lock(impl_->mutex);
  const auto it = impl_->indices.find(index);
  if (it == impl_->indices.end()) return std::nullopt;
  return it->second->building.size();
}

}  // namespace vexbench
