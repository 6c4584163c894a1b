// Copyright 2026 The Sibyl Authors.
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

#ifndef SIBYL_HTTP_CLIENT_HPP_
#define SIBYL_HTTP_CLIENT_HPP_

#include <chrono>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "sibyl/error.hpp"
#include "sibyl/eval.hpp"
#include "sibyl/parallel.hpp"

namespace sibyl {

struct HttpOptions {
  std::size_t batch_size = 32;
  std::chrono::milliseconds timeout{30000};
  int retries = 3;
  std::chrono::milliseconds backoff_base{1000};  // doubled per retry
  std::size_t concurrency = 1;
};

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;

  // Plain http only.
  static Endpoint Parse(std::string_view url) {
    constexpr std::string_view kScheme = "http://";
    if (url.substr(0, kScheme.size()) != kScheme) {
      throw Error(ErrorCode::kInvalidArgument, "endpoint must be an http:// URL: " + std::string(url));
    }
    const auto slash = url.find('/', kScheme.size());
    Endpoint e;
    e.origin = std::string(url.substr(0, slash));
    e.path = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
    if (e.origin.size() == kScheme.size()) throw Error(ErrorCode::kInvalidArgument, "endpoint has no host");
    return e;
  }
};

namespace detail {

inline bool Retryable(int status) { return status == 429 || status >= 500; }

inline std::vector<Prediction> PostBatch(const Endpoint& endpoint, const std::vector<std::string>& texts,
                                         std::size_t num_classes, const HttpOptions& options) {
  const std::string body = nlohmann::json{{"texts", texts}}.dump();
  std::string failure;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options.backoff_base * (1 << (attempt - 1)));
    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_write_timeout(options.timeout);
    auto res = client.Post(endpoint.path, body, "application/json");
    if (!res) {
      failure = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      failure = "HTTP " + std::to_string(res->status);
      if (Retryable(res->status)) continue;
      throw Error(ErrorCode::kTransport, failure);
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kProtocolError, std::string("malformed response body: ") + e.what());
    }
    if (!j.is_object() || !j.contains("probs") || !j["probs"].is_array()) {
      throw Error(ErrorCode::kProtocolError, "response lacks a \"probs\" array");
    }
    const auto& rows = j["probs"];
    if (rows.size() != texts.size()) {
      throw Error(ErrorCode::kProtocolError, "sent " + std::to_string(texts.size()) + " texts, got " +
                                                 std::to_string(rows.size()) + " predictions");
    }
    std::vector<Prediction> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
      if (!row.is_array()) throw Error(ErrorCode::kProtocolError, "each prediction must be an array");
      Prediction p;
      for (const auto& v : row) {
        if (!v.is_number()) throw Error(ErrorCode::kProtocolError, "scores must be numbers");
        p.probs.push_back(v.get<double>());
      }
      if (num_classes != 0 && p.probs.size() != num_classes) {
        throw Error(ErrorCode::kProtocolError, "prediction has " + std::to_string(p.probs.size()) +
                                                   " scores, expected " + std::to_string(num_classes));
      }
      out.push_back(std::move(p));
    }
    return out;
  }
  throw Error(ErrorCode::kTransport, failure + " after " + std::to_string(options.retries) + " retries");
}

}  // namespace detail

// Chunks `texts` by batch_size; output order matches input order.
inline std::vector<Prediction> PredictHttp(std::string_view url, const std::vector<std::string>& texts,
                                           std::size_t num_classes = 0, const HttpOptions& options = {}) {
  if (options.batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch size must be positive");
  const Endpoint endpoint = Endpoint::Parse(url);
  const std::size_t batches = (texts.size() + options.batch_size - 1) / options.batch_size;
  std::vector<std::vector<Prediction>> results(batches);
  ParallelFor(batches, options.concurrency, [&](std::size_t b) {
    const auto first = texts.begin() + static_cast<std::ptrdiff_t>(b * options.batch_size);
    const auto last = texts.begin() + static_cast<std::ptrdiff_t>(std::min(texts.size(), (b + 1) * options.batch_size));
    results[b] = detail::PostBatch(endpoint, std::vector<std::string>(first, last), num_classes, options);
  });
  std::vector<Prediction> out;
  out.reserve(texts.size());
  for (auto& batch : results) {
    for (auto& p : batch) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sibyl

#endif  // SIBYL_HTTP_CLIENT_HPP_
