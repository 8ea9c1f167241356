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

#include <memory>
#include <optional>
#include <string>

#include "semantix/embedding.hpp"
#include "semantix/embedding_cache.hpp"
#include "semantix/error.hpp"
#include "semantix/http_embedder.hpp"

namespace semantix {

// Resolves an embedder spec:
//   test-hash          deterministic 256-dim hash embedder
//   cache:PATH         read-only cache file
//   http:URL           remote service (URL may omit the scheme)
// A cache path wraps the chosen backend so fetched vectors are persisted.
inline std::unique_ptr<EmbeddingProvider> make_provider(const std::string& spec,
                                                        const std::optional<std::string>& cache_path = std::nullopt,
                                                        HttpEmbedderOptions http = {}) {
  std::unique_ptr<EmbeddingProvider> backend;
  if (spec == "test-hash") {
    backend = std::make_unique<TestHashEmbedder>();
  } else if (spec.starts_with("cache:")) {
    const std::string path = spec.substr(6);
    if (path.empty()) throw RangeError("embedder 'cache:' needs a path");
    if (cache_path && *cache_path != path) throw RangeError("conflicting cache paths");
    return std::make_unique<CachedEmbedder>(EmbeddingCache::open(path));
  } else if (spec.starts_with("https:")) {
    throw RangeError("https embedders are not supported; use http:URL");
  } else if (spec.starts_with("http://")) {
    backend = std::make_unique<HttpEmbedder>(spec, http);
  } else if (spec.starts_with("http:")) {
    std::string url = spec.substr(5);
    if (url.empty()) throw RangeError("embedder 'http:' needs a URL");
    if (url.find("://") == std::string::npos) url = "http://" + (url.starts_with("//") ? url.substr(2) : url);
    backend = std::make_unique<HttpEmbedder>(url, http);
  } else {
    throw RangeError("unknown embedder '" + spec + "' (expected test-hash, cache:PATH or http:URL)");
  }
  if (cache_path)
    return std::make_unique<CachedEmbedder>(EmbeddingCache::open(*cache_path),
                                            std::shared_ptr<EmbeddingProvider>(std::move(backend)));
  return backend;
}

}  // namespace semantix
