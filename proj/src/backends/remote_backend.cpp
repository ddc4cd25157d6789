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
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>

#include <httplib.h>

#include "vexbench/remote.hpp"
#include "wire.hpp"

namespace vexbench {
namespace {

using nlohmann::json;

std::string unique_index_name() {
  static std::atomic<unsigned> counter{0};
  return "vexbench-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
}

httplib::Client make_client(const Endpoint& ep) {
  httplib::Client cli(ep.host, ep.port);
  cli.set_keep_alive(true);
  cli.set_connection_timeout(5, 0);
  cli.set_read_timeout(300, 0);
  cli.set_write_timeout(300, 0);
  return cli;
}

json call(httplib::Client& cli, const Endpoint& ep, const std::string& method,
          const std::string& path, const json& body) {
  const std::string payload = body.dump();
  const httplib::Result res = method == "PUT"
                                  ? cli.Put(path, payload, "application/json")
                                  : cli.Post(path, payload, "application/json");
  if (!res) {
    throw Error(ErrorCode::kConnection, "cannot reach search service at " + ep.to_string() +
                                            ": " + httplib::to_string(res.error()));
  }
  json reply = json::parse(res->body, nullptr, false);
  if (res->status != 200) {
    std::string message = "HTTP " + std::to_string(res->status);
    if (!reply.is_discarded() && reply.contains("error") && reply["error"].is_string()) {
      message = reply["error"].get<std::string>() + " (" + message + ")";
    }
    throw Error(ErrorCode::kProtocol,
                "search service " + ep.to_string() + " rejected " + method + " " + path + ": " +
                    message);
  }
  if (reply.is_discarded() || !reply.is_object()) {
    throw Error(ErrorCode::kProtocol, "search service " + ep.to_string() +
                                          " returned a non-JSON reply for " + path);
  }
  return reply;
}

}  // namespace

Endpoint Endpoint::parse(std::string_view url) {
  std::string_view rest = url;
  if (rest.starts_with("http://")) rest.remove_prefix(7);
  if (rest.starts_with("https://")) {
    throw Error(ErrorCode::kInvalidArgument, "https endpoints are not supported: " + std::string(url));
  }
  while (rest.ends_with('/')) rest.remove_suffix(1);
  Endpoint ep;
  ep.port = 80;
  const auto colon = rest.rfind(':');
  if (colon != std::string_view::npos) {
    const std::string_view port = rest.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), ep.port);
    if (ec != std::errc{} || ptr != port.data() + port.size() || ep.port <= 0 || ep.port > 65535) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in endpoint '" + std::string(url) + "'");
    }
    rest = rest.substr(0, colon);
  }
  if (rest.empty() || rest.find('/') != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "bad endpoint '" + std::string(url) + "'");
  }
  ep.host = std::string(rest);
  return ep;
}

std::string Endpoint::to_string() const { return "http://" + host + ":" + std::to_string(port); }

RemoteBackend::RemoteBackend(Endpoint endpoint, std::string index_name, std::size_t bulk_batch)
    : endpoint_(std::move(endpoint)),
      index_name_(index_name.empty() ? unique_index_name() : std::move(index_name)),
      bulk_batch_(std::max<std::size_t>(bulk_batch, 1)) {}

void RemoteBackend::index(std::span<const Document> docs) {
  if (indexed_) throw Error(ErrorCode::kIndexSealed, "backend has already been indexed");
  if (docs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "remote index needs at least one document");
  }
  const std::size_t dim = docs.front().embedding.dim();
  for (const auto& d : docs) require_same_dim(dim, d.embedding.dim());

  httplib::Client cli = make_client(endpoint_);
  const std::string base = "/index/" + index_name_;
  call(cli, endpoint_, "PUT", base, json{{"dim", dim}});

  std::size_t indexed = 0;
  for (std::size_t begin = 0; begin < docs.size(); begin += bulk_batch_) {
    const std::size_t end = std::min(docs.size(), begin + bulk_batch_);
    json batch = json::array();
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back({{"id", docs[i].id},
                       {"embedding", wire::embedding_to_json(docs[i].embedding.values())}});
    }
    const json reply = call(cli, endpoint_, "POST", base + "/bulk", json{{"docs", std::move(batch)}});
    if (!reply.contains("indexed") || !reply["indexed"].is_number_unsigned()) {
      throw Error(ErrorCode::kProtocol, "bulk reply from " + endpoint_.to_string() +
                                            " lacks an 'indexed' count");
    }
    indexed += reply["indexed"].get<std::size_t>();
  }
  if (indexed != docs.size()) {
    throw Error(ErrorCode::kProtocol, "search service acknowledged " + std::to_string(indexed) +
                                          " of " + std::to_string(docs.size()) + " documents");
  }
  size_ = indexed;
  indexed_ = true;
}

ResultList RemoteBackend::query(const Embedding& q, std::size_t k) const {
  if (!indexed_) throw Error(ErrorCode::kIndexNotSealed, "backend has not been indexed");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");

  httplib::Client cli = make_client(endpoint_);
  const json reply =
      call(cli, endpoint_, "POST", "/index/" + index_name_ + "/search",
           json{{"embedding", wire::embedding_to_json(q.values())}, {"k", k}});
  if (!reply.contains("hits") || !reply["hits"].is_array()) {
    throw Error(ErrorCode::kProtocol, "search reply from " + endpoint_.to_string() + " lacks 'hits'");
  }

  ResultList out;
  out.k_requested = k;
  for (const auto& h : reply["hits"]) {
    if (!h.is_object() || !h.contains("id") || !h.contains("score") || !h["id"].is_number_integer() ||
        !h["score"].is_number()) {
      throw Error(ErrorCode::kProtocol, "malformed hit in reply from " + endpoint_.to_string());
    }
    const double cosine = std::clamp(h["score"].get<double>() - kWireScoreShift, -1.0, 1.0);
    out.hits.push_back({h["id"].get<DocId>(), cosine});
  }
  std::sort(out.hits.begin(), out.hits.end(), ranks_before);
  return out;
}

}  // namespace vexbench
