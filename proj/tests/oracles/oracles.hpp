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

// Independent reference implementations used only by the tests. None of these
// share code paths with the library functions they check.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace semantix::oracle {

// Plain exhaustive recursion over the three edit operations.
inline int edit_distance_recursive(const std::string& a, const std::string& b, std::size_t i = 0,
                                   std::size_t j = 0) {
  if (i == a.size()) return static_cast<int>(b.size() - j);
  if (j == b.size()) return static_cast<int>(a.size() - i);
  int best = edit_distance_recursive(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
  best = std::min(best, edit_distance_recursive(a, b, i + 1, j) + 1);
  best = std::min(best, edit_distance_recursive(a, b, i, j + 1) + 1);
  return best;
}

// Softmax cross-entropy by direct summation in long double, no max shift.
inline long double cross_entropy(const std::vector<double>& logits, std::size_t classes,
                                 const std::vector<std::int64_t>& labels, const std::vector<double>& weights,
                                 std::int64_t ignore) {
  long double total = 0.0L;
  std::size_t counted = 0;
  for (std::size_t pos = 0; pos < labels.size(); ++pos) {
    if (labels[pos] == ignore) continue;
    long double z = 0.0L;
    for (std::size_t c = 0; c < classes; ++c) z += std::exp(static_cast<long double>(logits[pos * classes + c]));
    const auto y = static_cast<std::size_t>(labels[pos]);
    long double p = std::exp(static_cast<long double>(logits[pos * classes + y])) / z;
    total += -static_cast<long double>(weights.empty() ? 1.0 : weights[y]) * std::log(p);
    ++counted;
  }
  return total / static_cast<long double>(counted);
}

// Textbook BLEU over a whitespace-tokenized corpus, counting n-grams as
// joined strings.
inline double corpus_bleu(const std::vector<std::pair<std::string, std::string>>& pairs, int max_order) {
  auto tokens = [](const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> t;
    for (std::string w; in >> w;) t.push_back(w);
    return t;
  };
  std::vector<double> match(max_order, 0), total(max_order, 0);
  double hyp_len = 0, ref_len = 0;
  for (const auto& [ref_s, hyp_s] : pairs) {
    auto ref = tokens(ref_s), hyp = tokens(hyp_s);
    hyp_len += hyp.size();
    ref_len += ref.size();
    for (int n = 1; n <= max_order; ++n) {
      std::map<std::string, int> rc, hc;
      auto grams = [n](const std::vector<std::string>& t, std::map<std::string, int>& out) {
        for (std::size_t i = 0; i + n <= t.size(); ++i) {
          std::string g;
          for (int k = 0; k < n; ++k) g += t[i + k] + '\x1f';
          ++out[g];
        }
      };
      grams(ref, rc);
      grams(hyp, hc);
      for (const auto& [g, c] : hc) {
        total[n - 1] += c;
        match[n - 1] += std::min(c, rc.count(g) ? rc.at(g) : 0);
      }
    }
  }
  double logp = 0;
  for (int n = 0; n < max_order; ++n) {
    if (match[n] == 0) return 0.0;
    logp += std::log(match[n] / total[n]);
  }
  double bp = hyp_len >= ref_len ? 1.0 : std::exp(1.0 - ref_len / hyp_len);
  return 100.0 * bp * std::exp(logp / max_order);
}

}  // namespace semantix::oracle
