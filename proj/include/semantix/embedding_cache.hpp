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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semantix/embedding.hpp"
#include "semantix/error.hpp"

namespace semantix {

// On-disk layout, all integers little-endian:
//
//   header:  "SMXE" | u32 version | u32 name_len | name bytes | u32 dim
//   record:  u64 fnv1a64(text) | u32 text_len | text bytes | dim x f32
//
// Records are appended with a single write each, so an interrupted run leaves
// a file holding only complete records.
class EmbeddingCache {
 public:
  static constexpr char kMagic[4] = {'S', 'M', 'X', 'E'};
  static constexpr std::uint32_t kVersion = 1;

  // Loads an existing cache, or prepares an empty one whose header is written
  // on the first append.
  static EmbeddingCache open(const std::filesystem::path& path) {
    EmbeddingCache cache(path);
    if (std::filesystem::exists(path)) cache.load();
    return cache;
  }

  EmbeddingCache(EmbeddingCache&& o) noexcept
      : path_(std::move(o.path_)),
        provider_(std::move(o.provider_)),
        dim_(o.dim_),
        header_on_disk_(o.header_on_disk_),
        entries_(std::move(o.entries_)),
        order_(std::move(o.order_)) {}

  const std::filesystem::path& path() const noexcept { return path_; }
  const std::string& provider_name() const noexcept { return provider_; }
  std::size_t dim() const noexcept { return dim_; }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
  }

  bool empty() const { return size() == 0; }

  // Texts in the order their records appear in the file.
  std::vector<std::string> texts() const {
    std::shared_lock lock(mu_);
    return order_;
  }

  // Fixes the provider identity for a fresh cache, or checks it against an
  // existing one. Mixing providers in one file is a CacheError.
  void bind(const std::string& provider_name, std::size_t dim) {
    std::unique_lock lock(mu_);
    if (provider_.empty() && dim_ == 0) {
      provider_ = provider_name;
      dim_ = dim;
      return;
    }
    if (provider_ != provider_name)
      throw CacheError(path_.string(), "written by provider '" + provider_ +
                                           "', refusing to mix with '" + provider_name + "'");
    if (dim != 0 && dim_ != 0 && dim != dim_)
      throw CacheError(path_.string(), "dimension " + std::to_string(dim_) +
                                           " does not match provider dimension " +
                                           std::to_string(dim));
    if (dim_ == 0) dim_ = dim;
  }

  std::optional<EmbeddingVector> lookup(const std::string& text) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(text);
    if (it == entries_.end()) return std::nullopt;
    return EmbeddingVector::from_floats(it->second);
  }

  bool contains(const std::string& text) const {
    std::shared_lock lock(mu_);
    return entries_.count(text) != 0;
  }

  // Appends one record; a text already present is left untouched. Returns
  // whether a record was written.
  bool append(const std::string& text, const EmbeddingVector& v) {
    std::unique_lock lock(mu_);
    if (entries_.count(text)) return false;
    if (provider_.empty()) throw CacheError(path_.string(), "append before provider is bound");
    if (dim_ == 0) dim_ = v.dim();
    if (v.dim() != dim_)
      throw CacheError(path_.string(), "vector of dimension " + std::to_string(v.dim()) +
                                           " does not fit cache dimension " + std::to_string(dim_));
    std::vector<float> floats = v.to_floats();

    std::string buf;
    if (!header_on_disk_) buf = encode_header();
    put_u64(buf, fnv1a64(text));
    put_u32(buf, static_cast<std::uint32_t>(text.size()));
    buf += text;
    for (float f : floats) put_u32(buf, std::bit_cast<std::uint32_t>(f));

    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw CacheError(path_.string(), "cannot open for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw CacheError(path_.string(), "write failed");
    header_on_disk_ = true;
    entries_.emplace(text, std::move(floats));
    order_.push_back(text);
    return true;
  }

 private:
  explicit EmbeddingCache(std::filesystem::path path) : path_(std::move(path)) {}

  static void put_u32(std::string& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  static void put_u64(std::string& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }

  std::string encode_header() const {
    std::string b(kMagic, 4);
    put_u32(b, kVersion);
    put_u32(b, static_cast<std::uint32_t>(provider_.size()));
    b += provider_;
    put_u32(b, static_cast<std::uint32_t>(dim_));
    return b;
  }

  class Reader {
   public:
    Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

    bool done() const { return pos_ == data_.size(); }

    std::uint32_t u32(const char* what) {
      need(4, what);
      std::uint32_t v = 0;
      for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
      pos_ += 4;
      return v;
    }
    std::uint64_t u64(const char* what) {
      need(8, what);
      std::uint64_t v = 0;
      for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
      pos_ += 8;
      return v;
    }
    std::string bytes(std::size_t n, const char* what) {
      need(n, what);
      std::string s = data_.substr(pos_, n);
      pos_ += n;
      return s;
    }
    std::size_t offset() const { return pos_; }

   private:
    void need(std::size_t n, const char* what) {
      if (data_.size() - pos_ < n)
        throw CacheError(path_, std::string("truncated ") + what + " at byte " + std::to_string(pos_));
    }
    const std::string& data_;
    const std::string& path_;
    std::size_t pos_ = 0;
  };

  void load() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw CacheError(path_.string(), "cannot open for reading");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string p = path_.string();
    if (data.empty()) return;  // created but never written; treated as fresh
    Reader r(data, p);
    if (r.bytes(4, "magic") != std::string(kMagic, 4)) throw CacheError(p, "bad magic bytes");
    if (auto v = r.u32("version"); v != kVersion)
      throw CacheError(p, "unsupported format version " + std::to_string(v));
    provider_ = r.bytes(r.u32("provider name length"), "provider name");
    dim_ = r.u32("dimension");
    if (dim_ == 0) throw CacheError(p, "zero dimension in header");
    header_on_disk_ = true;
    while (!r.done()) {
      const std::size_t at = r.offset();
      std::uint64_t hash = r.u64("record hash");
      std::string text = r.bytes(r.u32("record text length"), "record text");
      if (fnv1a64(text) != hash)
        throw CacheError(p, "record at byte " + std::to_string(at) + " fails its text hash");
      std::vector<float> v(dim_);
      for (auto& f : v) f = std::bit_cast<float>(r.u32("record vector"));
      if (!entries_.emplace(text, std::move(v)).second)
        throw CacheError(p, "duplicate record at byte " + std::to_string(at));
      order_.push_back(std::move(text));
    }
  }

  std::filesystem::path path_;
  std::string provider_;
  std::size_t dim_ = 0;
  bool header_on_disk_ = false;
  std::unordered_map<std::string, std::vector<float>> entries_;
  std::vector<std::string> order_;
  mutable std::shared_mutex mu_;
};

// Serves vectors from a cache file, falling back to an inner provider for
// misses and persisting what it fetches. Without an inner provider a miss is
// a permanent ProviderError.
class CachedEmbedder final : public EmbeddingProvider {
 public:
  CachedEmbedder(EmbeddingCache cache, std::shared_ptr<EmbeddingProvider> inner = nullptr)
      : cache_(std::move(cache)), inner_(std::move(inner)) {
    if (inner_) {
      cache_.bind(inner_->name(), cache_.dim());
    } else if (cache_.provider_name().empty()) {
      throw CacheError(cache_.path().string(), "no such cache and no provider to fill it");
    }
  }

  std::string name() const override { return cache_.provider_name(); }

  std::size_t dim() const override {
    if (cache_.dim() != 0) return cache_.dim();
    return inner_ ? inner_->dim() : 0;
  }

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override {
    fill(texts);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(*cache_.lookup(t));
    return out;
  }

  // Ensures every text has a record; returns the number of records added.
  // Misses are fetched in chunks and persisted chunk by chunk, so a failure
  // part way keeps everything fetched before it.
  std::size_t fill(std::span<const std::string> texts, std::size_t chunk = 256) {
    std::vector<std::string> missing;
    std::unordered_set<std::string> seen;
    for (const auto& t : texts)
      if (!cache_.contains(t) && seen.insert(t).second) missing.push_back(t);
    if (missing.empty()) return 0;
    if (!inner_)
      throw ProviderError("cache " + cache_.path().string() + " has no record for text \"" +
                              missing.front() + "\"",
                          false);
    std::size_t added = 0;
    for (std::size_t i = 0; i < missing.size(); i += chunk) {
      std::span<const std::string> part(missing.data() + i, std::min(chunk, missing.size() - i));
      auto vecs = semantix::embed(part, *inner_);
      for (std::size_t k = 0; k < part.size(); ++k) added += cache_.append(part[k], vecs[k]) ? 1 : 0;
    }
    return added;
  }

  const EmbeddingCache& cache() const noexcept { return cache_; }

 private:
  EmbeddingCache cache_;
  std::shared_ptr<EmbeddingProvider> inner_;
};

}  // namespace semantix
