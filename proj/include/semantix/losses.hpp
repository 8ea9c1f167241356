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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semantix/embedding.hpp"
#include "semantix/error.hpp"

namespace semantix {

// Pairwise (tree) summation; the result depends only on the order of `xs`.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

// Weights of the semantic and cross-entropy terms. alpha and beta scale the
// sum variant, gamma offsets the semantic factor of the product variant.
struct LossParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  void validate() const {
    for (double v : {alpha, beta, gamma})
      if (!std::isfinite(v) || v < 0.0) throw RangeError("loss weights must be finite and >= 0");
  }

  void validate_sum() const {
    validate();
    if (alpha + beta <= 0.0) throw RangeError("alpha + beta must be positive for the sum loss");
  }
};

// Row-major N x T x C logits.
class LogitsBatch {
 public:
  LogitsBatch(std::size_t batch, std::size_t positions, std::size_t classes, std::vector<double> values)
      : n_(batch), t_(positions), c_(classes), values_(std::move(values)) {
    if (c_ < 2) throw DataError("logits need at least two classes");
    if (values_.size() != n_ * t_ * c_)
      throw DataError("logits buffer holds " + std::to_string(values_.size()) + " values, shape needs " +
                      std::to_string(n_ * t_ * c_));
  }

  static LogitsBatch zeros(std::size_t batch, std::size_t positions, std::size_t classes) {
    return LogitsBatch(batch, positions, classes, std::vector<double>(batch * positions * classes, 0.0));
  }

  std::size_t batch() const noexcept { return n_; }
  std::size_t positions() const noexcept { return t_; }
  std::size_t classes() const noexcept { return c_; }

  double& at(std::size_t n, std::size_t t, std::size_t c) { return values_[(n * t_ + t) * c_ + c]; }
  double at(std::size_t n, std::size_t t, std::size_t c) const { return values_[(n * t_ + t) * c_ + c]; }

  std::span<double> row(std::size_t n, std::size_t t) { return {values_.data() + (n * t_ + t) * c_, c_}; }
  std::span<const double> row(std::size_t n, std::size_t t) const {
    return {values_.data() + (n * t_ + t) * c_, c_};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_, t_, c_;
  std::vector<double> values_;
};

// Target ids, N x T, with kIgnore marking padding. Class weights default to 1.
struct LabelBatch {
  static constexpr std::int64_t kIgnore = -100;

  std::size_t batch = 0;
  std::size_t positions = 0;
  std::vector<std::int64_t> ids;
  std::vector<double> class_weights;

  std::int64_t at(std::size_t n, std::size_t t) const { return ids[n * positions + t]; }
};

struct CrossEntropyResult {
  double value;
  LogitsBatch gradient;
};

// Mean over non-ignored positions of w_y * -log softmax(logits)_y. The
// gradient at a counted position is w_y * (softmax - onehot(y)) / M.
inline CrossEntropyResult loss_ce(const LogitsBatch& logits, const LabelBatch& labels) {
  const std::size_t C = logits.classes();
  if (labels.batch != logits.batch() || labels.positions != logits.positions() ||
      labels.ids.size() != labels.batch * labels.positions)
    throw DataError("label shape does not match logits shape");
  std::vector<double> weights = labels.class_weights.empty() ? std::vector<double>(C, 1.0) : labels.class_weights;
  if (weights.size() != C) throw DataError("class weight count does not match vocabulary size");
  for (double w : weights)
    if (!std::isfinite(w) || w < 0.0) throw DataError("class weights must be finite and >= 0");
  for (double v : logits.values())
    if (!std::isfinite(v)) throw DataError("non-finite logit");

  std::size_t counted = 0;
  for (std::int64_t id : labels.ids) {
    if (id == LabelBatch::kIgnore) continue;
    if (id < 0 || static_cast<std::size_t>(id) >= C)
      throw DataError("label id " + std::to_string(id) + " outside vocabulary of size " + std::to_string(C));
    ++counted;
  }
  if (counted == 0) throw DataError("cross-entropy undefined: every position is ignored");
  const double M = static_cast<double>(counted);

  LogitsBatch grad = LogitsBatch::zeros(logits.batch(), logits.positions(), C);
  std::vector<double> terms;
  terms.reserve(counted);
  std::vector<double> exps(C);
  for (std::size_t n = 0; n < logits.batch(); ++n) {
    for (std::size_t t = 0; t < logits.positions(); ++t) {
      const std::int64_t id = labels.at(n, t);
      if (id == LabelBatch::kIgnore) continue;
      auto row = logits.row(n, t);
      double mx = row[0];
      for (double v : row) mx = std::max(mx, v);
      for (std::size_t c = 0; c < C; ++c) exps[c] = std::exp(row[c] - mx);
      const double z = pairwise_sum(exps);
      const double log_z = mx + std::log(z);
      const auto y = static_cast<std::size_t>(id);
      const double w = weights[y];
      terms.push_back(w * (log_z - row[y]));
      auto g = grad.row(n, t);
      for (std::size_t c = 0; c < C; ++c) g[c] = w * (exps[c] / z - (c == y ? 1.0 : 0.0)) / M;
    }
  }
  return {pairwise_sum(terms) / M, std::move(grad)};
}

// (1/N) sum_n sem_dist(enc(ref_n), enc(hyp_n)).
inline double loss_sd(std::span<const std::string> references, std::span<const std::string> hypotheses,
                      EmbeddingProvider& provider) {
  if (references.size() != hypotheses.size())
    throw DataError("loss_sd: " + std::to_string(references.size()) + " references vs " +
                    std::to_string(hypotheses.size()) + " hypotheses");
  if (references.empty()) throw DataError("loss_sd: empty batch");
  auto x = embed(references, provider);
  auto y = embed(hypotheses, provider);
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = sem_dist(x[i], y[i]);
  return pairwise_sum(d) / static_cast<double>(d.size());
}

namespace detail {
inline void check_loss_terms(double sd, double ce) {
  if (!std::isfinite(sd) || sd < 0.0 || !std::isfinite(ce) || ce < 0.0)
    throw RangeError("loss terms must be finite and >= 0");
}
}  // namespace detail

// alpha * sd + beta * ce
inline double loss_semantix_sum(double sd, double ce, const LossParams& params) {
  params.validate_sum();
  detail::check_loss_terms(sd, ce);
  return params.alpha * sd + params.beta * ce;
}

// (gamma + sd) * ce
inline double loss_semantix_prod(double sd, double ce, const LossParams& params) {
  params.validate();
  detail::check_loss_terms(sd, ce);
  return (params.gamma + sd) * ce;
}

}  // namespace semantix
