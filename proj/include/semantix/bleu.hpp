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
#include <cstdio>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "semantix/error.hpp"
#include "semantix/utf8.hpp"

namespace semantix {

struct BleuConfig {
  enum class Smoothing { none, additive };

  int max_ngram_order = 4;
  Smoothing smoothing = Smoothing::none;
  double epsilon = 0.1;  // used only with Smoothing::additive

  void validate() const {
    if (max_ngram_order < 1 || max_ngram_order > 9)
      throw RangeError("BLEU max n-gram order must lie in [1, 9], got " +
                       std::to_string(max_ngram_order));
    if (smoothing == Smoothing::additive && !(epsilon > 0.0 && std::isfinite(epsilon)))
      throw RangeError("BLEU additive smoothing requires epsilon > 0");
  }

  std::string describe() const {
    std::string s = "order=" + std::to_string(max_ngram_order) + ",tokenizer=whitespace,smoothing=";
    if (smoothing == Smoothing::none) return s + "none";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", epsilon);
    return s + "additive(" + buf + ")";
  }
};

// Sufficient statistics: clipped matches and hypothesis n-gram totals per
// order, plus lengths. Summing stats over sentences gives corpus BLEU.
struct BleuStats {
  std::vector<std::uint64_t> matches;
  std::vector<std::uint64_t> totals;
  std::uint64_t hypothesis_length = 0;
  std::uint64_t reference_length = 0;

  explicit BleuStats(int order = 4) : matches(order, 0), totals(order, 0) {}

  BleuStats& operator+=(const BleuStats& o) {
    for (std::size_t n = 0; n < matches.size(); ++n) {
      matches[n] += o.matches[n];
      totals[n] += o.totals[n];
    }
    hypothesis_length += o.hypothesis_length;
    reference_length += o.reference_length;
    return *this;
  }
};

namespace detail {

using NgramCounts = std::map<std::vector<std::string_view>, std::uint64_t>;

inline NgramCounts count_ngrams(const std::vector<std::string>& toks, std::size_t n) {
  NgramCounts counts;
  if (toks.size() < n) return counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::vector<std::string_view> key(toks.begin() + i, toks.begin() + i + n);
    ++counts[std::move(key)];
  }
  return counts;
}

}  // namespace detail

inline BleuStats bleu_stats(std::string_view reference, std::string_view hypothesis,
                            const BleuConfig& config) {
  config.validate();
  auto ref = utf8::split_words(reference);
  if (ref.empty()) throw DataError("BLEU undefined: reference has no tokens");
  auto hyp = utf8::split_words(hypothesis);

  BleuStats st(config.max_ngram_order);
  st.reference_length = ref.size();
  st.hypothesis_length = hyp.size();
  for (int order = 1; order <= config.max_ngram_order; ++order) {
    const auto n = static_cast<std::size_t>(order);
    auto hyp_counts = detail::count_ngrams(hyp, n);
    auto ref_counts = detail::count_ngrams(ref, n);
    std::uint64_t matched = 0;
    std::uint64_t total = 0;
    for (const auto& [gram, c] : hyp_counts) {
      total += c;
      if (auto it = ref_counts.find(gram); it != ref_counts.end()) matched += std::min(c, it->second);
    }
    st.matches[n - 1] = matched;
    st.totals[n - 1] = total;
  }
  return st;
}

// Geometric mean of modified precisions times the brevity penalty, in [0, 100].
// Additive smoothing uses (m + eps) / (t + eps) for every order.
inline double bleu_from_stats(const BleuStats& st, const BleuConfig& config) {
  config.validate();
  if (st.hypothesis_length == 0) return 0.0;
  double log_sum = 0.0;
  const auto orders = static_cast<std::size_t>(config.max_ngram_order);
  for (std::size_t n = 0; n < orders; ++n) {
    double m = static_cast<double>(st.matches[n]);
    double t = static_cast<double>(st.totals[n]);
    if (config.smoothing == BleuConfig::Smoothing::additive) {
      m += config.epsilon;
      t += config.epsilon;
    }
    if (m <= 0.0 || t <= 0.0) return 0.0;
    log_sum += std::log(m / t);
  }
  double c = static_cast<double>(st.hypothesis_length);
  double r = static_cast<double>(st.reference_length);
  double log_bp = c >= r ? 0.0 : 1.0 - r / c;
  double score = 100.0 * std::exp(log_sum / static_cast<double>(orders) + log_bp);
  return std::clamp(score, 0.0, 100.0);
}

inline double brevity_penalty(const BleuStats& st) {
  if (st.hypothesis_length == 0) return 0.0;
  if (st.hypothesis_length >= st.reference_length) return 1.0;
  return std::exp(1.0 - static_cast<double>(st.reference_length) /
                            static_cast<double>(st.hypothesis_length));
}

inline double sentence_bleu(std::string_view reference, std::string_view hypothesis,
                            const BleuConfig& config = {}) {
  return bleu_from_stats(bleu_stats(reference, hypothesis, config), config);
}

template <typename Pairs>
double corpus_bleu(const Pairs& pairs, const BleuConfig& config = {}) {
  BleuStats total(config.max_ngram_order);
  std::size_t count = 0;
  for (const auto& p : pairs) {
    total += bleu_stats(p.reference, p.hypothesis, config);
    ++count;
  }
  if (count == 0) throw DataError("corpus BLEU undefined: empty corpus");
  return bleu_from_stats(total, config);
}

}  // namespace semantix
