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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semantix/error.hpp"
#include "semantix/utf8.hpp"

namespace semantix {

// Decomposition of a minimal unit-cost alignment of a reference against a
// hypothesis. Insertions are hypothesis tokens absent from the reference.
struct EditStats {
  std::uint64_t substitutions = 0;
  std::uint64_t insertions = 0;
  std::uint64_t deletions = 0;
  std::uint64_t reference_length = 0;

  std::uint64_t distance() const noexcept { return substitutions + insertions + deletions; }

  EditStats& operator+=(const EditStats& o) noexcept {
    substitutions += o.substitutions;
    insertions += o.insertions;
    deletions += o.deletions;
    reference_length += o.reference_length;
    return *this;
  }

  friend EditStats operator+(EditStats a, const EditStats& b) noexcept { return a += b; }
  friend bool operator==(const EditStats&, const EditStats&) = default;
};

// Wagner-Fischer with a full backtrace matrix. Ties on the backtrace prefer
// match/substitution, then deletion, then insertion.
template <typename T>
EditStats levenshtein(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t m = ref.size();
  const std::size_t n = hyp.size();
  EditStats stats;
  stats.reference_length = m;
  if (m == 0) {
    stats.insertions = n;
    return stats;
  }
  if (n == 0) {
    stats.deletions = m;
    return stats;
  }

  const std::size_t w = n + 1;
  std::vector<std::uint32_t> d((m + 1) * w);
  for (std::size_t j = 0; j <= n; ++j) d[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    std::uint32_t* row = &d[i * w];
    const std::uint32_t* prev = &d[(i - 1) * w];
    row[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      std::uint32_t diag = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0u : 1u);
      std::uint32_t del = prev[j] + 1;
      std::uint32_t ins = row[j - 1] + 1;
      row[j] = std::min({diag, del, ins});
    }
  }

  std::size_t i = m;
  std::size_t j = n;
  while (i > 0 || j > 0) {
    const std::uint32_t here = d[i * w + j];
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (d[(i - 1) * w + (j - 1)] + (same ? 0u : 1u) == here) {
        if (!same) ++stats.substitutions;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && d[(i - 1) * w + j] + 1 == here) {
      ++stats.deletions;
      --i;
    } else {
      ++stats.insertions;
      --j;
    }
  }
  return stats;
}

template <typename T>
EditStats levenshtein(const std::vector<T>& ref, const std::vector<T>& hyp) {
  return levenshtein(std::span<const T>(ref), std::span<const T>(hyp));
}

inline EditStats levenshtein(std::u32string_view ref, std::u32string_view hyp) {
  return levenshtein(std::span<const char32_t>(ref.data(), ref.size()),
                     std::span<const char32_t>(hyp.data(), hyp.size()));
}

enum class ErrorLevel { word, character };

// Word tokens split on whitespace runs; character tokens are the code points
// of the whitespace-collapsed text, spaces included.
inline EditStats edit_stats(std::string_view reference, std::string_view hypothesis,
                            ErrorLevel level) {
  if (level == ErrorLevel::word) {
    auto ref = utf8::split_words(reference);
    if (ref.empty()) throw DataError("error rate undefined: reference has no words");
    return levenshtein(ref, utf8::split_words(hypothesis));
  }
  auto ref = utf8::collapse_whitespace(utf8::decode(reference));
  if (ref.empty()) throw DataError("error rate undefined: reference has no characters");
  return levenshtein(std::u32string_view(ref), utf8::collapse_whitespace(utf8::decode(hypothesis)));
}

inline double error_rate(const EditStats& s) {
  if (s.reference_length == 0) throw DataError("error rate undefined: empty reference");
  return 100.0 * static_cast<double>(s.distance()) / static_cast<double>(s.reference_length);
}

inline double wer(std::string_view reference, std::string_view hypothesis) {
  return error_rate(edit_stats(reference, hypothesis, ErrorLevel::word));
}

inline double cer(std::string_view reference, std::string_view hypothesis) {
  return error_rate(edit_stats(reference, hypothesis, ErrorLevel::character));
}

// Pooled rate: total edits over total reference length. `Pairs` is any range
// of objects with `reference` and `hypothesis` string members.
template <typename Pairs>
double corpus_error_rate(const Pairs& pairs, ErrorLevel level) {
  EditStats total;
  std::size_t count = 0;
  for (const auto& p : pairs) {
    total += edit_stats(p.reference, p.hypothesis, level);
    ++count;
  }
  if (count == 0) throw DataError("corpus error rate undefined: empty corpus");
  return error_rate(total);
}

}  // namespace semantix
