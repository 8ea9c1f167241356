// Copyright 2026 The SemantiX Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <future>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "semantix/embedding.hpp"
#include "semantix/error.hpp"

namespace semantix {

struct HttpEmbedderOptions {
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 4;
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{100};
  std::chrono::seconds connect_timeout{5};
  std::chrono::seconds read_timeout{120};
};

// Client for the embedding service:
//
//   POST {base}/embed   {"texts": [...]}  ->  {"dim": d, "embeddings": [[...], ...]}
//   GET  {base}/health  ->  {"status": "ok", "model": m, "dim": d}
//
// Non-200 responses carry {"error": msg}. Connection failures, 408, 429 and
// 5xx are retryable; other statuses and protocol violations are permanent.
// Vectors are rounded to float32 on receipt so they survive the cache format
// unchanged.
class HttpEmbedder final : public EmbeddingProvider {
 public:
  explicit HttpEmbedder(std::string url, HttpEmbedderOptions options = {})
      : url_(std::move(url)), options_(options) {
    if (options_.batch_size == 0 || options_.max_in_flight == 0)
      throw RangeError("batch size and in-flight limit must be positive");
    auto scheme = url_.find("://");
    auto path_start = url_.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) {
      host_ = url_;
    } else {
      host_ = url_.substr(0, path_start);
      prefix_ = url_.substr(path_start);
      while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    }
  }

  const std::string& url() const noexcept { return url_; }

  // Provider identity is the served model, as reported by /health.
  std::string name() const override {
    ensure_health();
    return "remote:" + model_;
  }

  std::size_t dim() const override {
    ensure_health();
    return dim_;
  }

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    std::vector<std::span<const std::string>> batches;
    for (std::size_t i = 0; i < texts.size(); i += options_.batch_size)
      batches.push_back(texts.subspan(i, std::min(options_.batch_size, texts.size() - i)));

    for (std::size_t start = 0; start < batches.size(); start += options_.max_in_flight) {
      std::size_t end = std::min(batches.size(), start + options_.max_in_flight);
      std::vector<std::future<std::vector<EmbeddingVector>>> inflight;
      for (std::size_t b = start; b < end; ++b)
        inflight.push_back(std::async(std::launch::async, [this, batch = batches[b]] {
          return post_with_retry(batch);
        }));
      std::exception_ptr first_error;
      for (auto& f : inflight) {
        try {
          for (auto& v : f.get()) out.push_back(std::move(v));
        } catch (...) {
          if (!first_error) first_error = std::current_exception();
        }
      }
      if (first_error) std::rethrow_exception(first_error);
    }
    return out;
  }

 private:
  httplib::Client client() const {
    httplib::Client c(host_);
    c.set_connection_timeout(options_.connect_timeout);
    c.set_read_timeout(options_.read_timeout);
    return c;
  }

  static std::string server_message(const httplib::Result& res) {
    try {
      auto j = nlohmann::json::parse(res->body);
      if (j.is_object() && j.contains("error") && j["error"].is_string()) return j["error"];
    } catch (const nlohmann::json::exception&) {
    }
    return res->body.substr(0, 200);
  }

  static bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

  void ensure_health() const {
    std::lock_guard lock(health_mu_);
    if (!model_.empty()) return;
    auto c = client();
    auto res = c.Get(prefix_ + "/health");
    if (!res)
      throw ProviderError("embedding service " + url_ + " unreachable: " + httplib::to_string(res.error()),
                          true);
    if (res->status != 200)
      throw ProviderError("embedding service " + url_ + " /health returned " +
                              std::to_string(res->status) + ": " + server_message(res),
                          retryable_status(res->status));
    try {
      auto j = nlohmann::json::parse(res->body);
      std::string model = j.at("model").get<std::string>();
      auto dim = j.at("dim").get<std::int64_t>();
      if (model.empty() || dim <= 0) throw ProviderError("embedding service reported an empty model or dim", false);
      dim_ = static_cast<std::size_t>(dim);
      model_ = std::move(model);
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError("malformed /health response from " + url_ + ": " + e.what(), false);
    }
  }

  std::vector<EmbeddingVector> post_with_retry(std::span<const std::string> batch) const {
    for (int attempt = 0;; ++attempt) {
      try {
        return post(batch);
      } catch (const ProviderError& e) {
        if (!e.retryable() || attempt >= options_.max_retries) throw;
      }
      std::this_thread::sleep_for(options_.retry_backoff * (1 << attempt));
    }
  }

  std::vector<EmbeddingVector> post(std::span<const std::string> batch) const {
    nlohmann::json body = {{"texts", nlohmann::json(std::vector<std::string>(batch.begin(), batch.end()))}};
    auto c = client();
    auto res = c.Post(prefix_ + "/embed", body.dump(), "application/json");
    if (!res)
      throw ProviderError("embedding service " + url_ + " unreachable: " + httplib::to_string(res.error()),
                          true);
    if (res->status != 200)
      throw ProviderError("embedding service " + url_ + " returned " + std::to_string(res->status) + ": " +
                              server_message(res),
                          retryable_status(res->status));

    std::vector<EmbeddingVector> out;
    try {
      auto j = nlohmann::json::parse(res->body);
      const auto dim = j.at("dim").get<std::int64_t>();
      const auto& rows = j.at("embeddings");
      if (!rows.is_array() || rows.size() != batch.size())
        throw ProviderError("embedding service returned " + std::to_string(rows.size()) + " vectors for " +
                                std::to_string(batch.size()) + " texts",
                            false);
      out.reserve(rows.size());
      for (const auto& row : rows) {
        if (!row.is_array() || static_cast<std::int64_t>(row.size()) != dim)
          throw ProviderError("embedding row length does not match dim " + std::to_string(dim), false);
        std::vector<double> v;
        v.reserve(row.size());
        for (const auto& x : row) v.push_back(static_cast<double>(static_cast<float>(x.get<double>())));
        out.emplace_back(std::move(v));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError(std::string("malformed /embed response: ") + e.what(), false);
    } catch (const DataError& e) {
      throw ProviderError(std::string("invalid vector from embedding service: ") + e.what(), false);
    }
    return out;
  }

  std::string url_;
  std::string host_;
  std::string prefix_;
  HttpEmbedderOptions options_;
  mutable std::mutex health_mu_;
  mutable std::string model_;
  mutable std::size_t dim_ = 0;
};

}  // namespace semantix
