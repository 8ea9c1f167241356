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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semantix/error.hpp"
#include "semantix/utf8.hpp"

namespace semantix {

// A sentence embedding. Non-empty, finite and never the zero vector.
class EmbeddingVector {
 public:
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DataError("embedding vector must have positive dimension");
    bool nonzero = false;
    for (double v : values_) {
      if (!std::isfinite(v)) throw DataError("embedding vector has a non-finite component");
      nonzero = nonzero || v != 0.0;
    }
    if (!nonzero) throw DataError("embedding vector is the zero vector");
  }

  static EmbeddingVector from_floats(std::span<const float> values) {
    return EmbeddingVector(std::vector<double>(values.begin(), values.end()));
  }

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
  }

  std::vector<float> to_floats() const { return {values_.begin(), values_.end()}; }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

inline double dot(const EmbeddingVector& x, const EmbeddingVector& y) {
  if (x.dim() != y.dim())
    throw DataError("embedding dimension mismatch: " + std::to_string(x.dim()) + " vs " +
                    std::to_string(y.dim()));
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

// 1 - cos(x, y), clamped to [0, 2].
inline double sem_dist(const EmbeddingVector& x, const EmbeddingVector& y) {
  double cosine = dot(x, y) / (x.norm() * y.norm());
  return std::clamp(1.0 - cosine, 0.0, 2.0);
}

// d sem_dist / dx = -( y / (|x||y|) - (x.y) x / (|x|^3 |y|) ).
// The gradient with respect to y is grad_sem_dist(y, x).
inline std::vector<double> grad_sem_dist(const EmbeddingVector& x, const EmbeddingVector& y) {
  const double xy = dot(x, y);
  const double nx = x.norm();
  const double ny = y.norm();
  std::vector<double> g(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i)
    g[i] = -(y[i] / (nx * ny) - xy * x[i] / (nx * nx * nx * ny));
  return g;
}

// Source of enc(text). Implementations are deterministic per instance: the
// same text always yields the same vector.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;

  // One vector per text, in input order.
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
};

// Checked front end over a provider: rejects empty input and verifies the
// provider honoured the count and dimension contract.
inline std::vector<EmbeddingVector> embed(std::span<const std::string> texts,
                                          EmbeddingProvider& provider) {
  if (texts.empty()) throw DataError("embed: empty text sequence");
  auto out = provider.embed(texts);
  if (out.size() != texts.size())
    throw ProviderError("provider " + provider.name() + " returned " + std::to_string(out.size()) +
                            " vectors for " + std::to_string(texts.size()) + " texts",
                        false);
  const std::size_t d = out.front().dim();
  for (const auto& v : out)
    if (v.dim() != d) throw ProviderError("provider returned vectors of mixed dimension", false);
  return out;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr std::size_t kTestHashDim = 256;

// Deterministic stand-in encoder: counts of code-point 3-grams hashed into
// 256 buckets (FNV-1a 64 of the 3-gram's UTF-8 bytes, mod 256), L2-normalized
// and rounded to float32. Texts with fewer than three code points map to e1.
inline EmbeddingVector test_hash_embed(std::string_view text) {
  std::vector<double> v(kTestHashDim, 0.0);
  std::u32string cps = utf8::decode(text);
  if (cps.size() < 3) {
    v[0] = 1.0;
    return EmbeddingVector(std::move(v));
  }
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
    std::string gram = utf8::encode(std::u32string_view(cps).substr(i, 3));
    v[fnv1a64(gram) % kTestHashDim] += 1.0;
  }
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x = static_cast<double>(static_cast<float>(x / n));
  return EmbeddingVector(std::move(v));
}

class TestHashEmbedder final : public EmbeddingProvider {
 public:
  std::string name() const override { return "test-hash"; }
  std::size_t dim() const override { return kTestHashDim; }

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(test_hash_embed(t));
    return out;
  }
};

}  // namespace semantix
