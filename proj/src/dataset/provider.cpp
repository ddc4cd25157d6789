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
#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "vexbench/enrich.hpp"
#include "vexbench/error.hpp"

namespace vexbench {
namespace {

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string truncate_tokens(std::string_view text, std::size_t max_tokens) {
  std::string out;
  std::size_t tokens = 0;
  std::size_t i = 0;
  while (tokens < max_tokens) {
    i = text.find_first_not_of(" \t\r\n\f\v", i);
    if (i == std::string_view::npos) break;
    std::size_t end = text.find_first_of(" \t\r\n\f\v", i);
    if (end == std::string_view::npos) end = text.size();
    if (tokens) out.push_back(' ');
    out.append(text.substr(i, end - i));
    ++tokens;
    i = end;
  }
  return out;
}

SyntheticProvider::SyntheticProvider(std::uint64_t seed, std::size_t dim) : seed_(seed), dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "provider dimension must be at least 1");
}

std::vector<Embedding> SyntheticProvider::encode(std::span<const std::string> texts,
                                                 std::size_t max_seq_len) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  std::vector<double> v(dim_);
  for (const auto& text : texts) {
    GaussianSource gauss(fnv1a(truncate_tokens(text, max_seq_len), seed_));
    for (auto& x : v) x = gauss.next();
    out.emplace_back(normalized(v));
  }
  return out;
}

std::string SyntheticProvider::describe() const {
  return "synthetic(seed=" + std::to_string(seed_) + ", dim=" + std::to_string(dim_) + ")";
}

RemoteProvider::RemoteProvider(Endpoint endpoint, std::size_t dim, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), dim_(dim), retry_(retry) {
  if (retry_.attempts == 0) retry_.attempts = 1;
}

std::vector<Embedding> RemoteProvider::encode(std::span<const std::string> texts,
                                              std::size_t max_seq_len) {
  using nlohmann::json;
  json request{{"texts", json::array()}, {"max_seq_len", max_seq_len}};
  for (const auto& t : texts) request["texts"].push_back(truncate_tokens(t, max_seq_len));
  const std::string payload = request.dump(-1, ' ', false, json::error_handler_t::replace);

  httplib::Client cli(endpoint_.host, endpoint_.port);
  cli.set_connection_timeout(5, 0);
  cli.set_read_timeout(300, 0);

  std::string last_error;
  for (std::size_t attempt = 1; attempt <= retry_.attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::duration<double>(retry_.backoff_seconds * (attempt - 1)));
    }
    const httplib::Result res = cli.Post("/encode", payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kProvider, "embedding provider " + describe() + " rejected the batch: HTTP " +
                                            std::to_string(res->status) + " " + res->body);
    }
    const json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("embeddings") || !reply["embeddings"].is_array()) {
      throw Error(ErrorCode::kProvider, "embedding provider " + describe() + " sent a malformed reply");
    }
    if (reply["embeddings"].size() != texts.size()) {
      throw Error(ErrorCode::kProvider, "embedding provider " + describe() + " returned " +
                                            std::to_string(reply["embeddings"].size()) + " vectors for " +
                                            std::to_string(texts.size()) + " texts");
    }
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& e : reply["embeddings"]) {
      std::vector<float> values;
      if (!e.is_array()) throw Error(ErrorCode::kProvider, "embedding provider " + describe() + " sent a non-array vector");
      for (const auto& x : e) {
        if (!x.is_number()) throw Error(ErrorCode::kProvider, "embedding provider " + describe() + " sent a non-numeric element");
        values.push_back(static_cast<float>(x.get<double>()));
      }
      if (values.size() != dim_) {
        throw Error(ErrorCode::kDimensionMismatch, "embedding provider " + describe() + " returned dimension " +
                                                       std::to_string(values.size()) + ", expected " +
                                                       std::to_string(dim_));
      }
      out.emplace_back(std::move(values));
    }
    return out;
  }
  throw Error(ErrorCode::kConnection, "embedding provider " + describe() + " unreachable after " +
                                          std::to_string(retry_.attempts) + " attempts: " + last_error);
}

}  // namespace vexbench
