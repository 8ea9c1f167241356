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
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semantix/embedding.hpp"
#include "semantix/losses.hpp"
#include "semantix/random.hpp"

namespace semantix {

// ||a - b|| / max(||a||, ||b||), with a floor on the denominator.
inline double relative_error(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
}

// Central differences of f at x with step h.
inline std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                              std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double fp = f(x);
    x[i] = orig - h;
    const double fm = f(x);
    x[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

struct GradientCheckOptions {
  std::uint64_t seed = 20230601;
  int trials = 100;
  double step = 1e-5;
  double tolerance = 1e-4;
  // Added to the first analytic gradient component; a negative control.
  double inject_fault = 0.0;
};

struct GradientCheckFailure {
  std::string loss;
  int trial;
  double relative_error;
  nlohmann::json instance;
};

struct GradientCheckReport {
  int trials = 0;
  double worst_ce = 0.0;
  double worst_sem_dist = 0.0;
  std::vector<GradientCheckFailure> failures;

  bool passed() const { return failures.empty(); }
  double worst() const { return std::max(worst_ce, worst_sem_dist); }
};

struct CrossEntropyInstance {
  LogitsBatch logits;
  LabelBatch labels;
};

inline CrossEntropyInstance random_ce_instance(SeededRng& rng) {
  const std::size_t N = 1 + rng.index(3);
  const std::size_t T = 1 + rng.index(4);
  const std::size_t C = 2 + rng.index(5);
  std::vector<double> v(N * T * C);
  for (auto& x : v) x = 2.0 * rng.normal();
  LabelBatch labels{N, T, std::vector<std::int64_t>(N * T), std::vector<double>(C)};
  for (auto& id : labels.ids)
    id = rng.uniform() < 0.2 ? LabelBatch::kIgnore : static_cast<std::int64_t>(rng.index(C));
  labels.ids[rng.index(N * T)] = static_cast<std::int64_t>(rng.index(C));
  for (auto& w : labels.class_weights) w = rng.uniform(0.5, 2.0);
  return {LogitsBatch(N, T, C, std::move(v)), std::move(labels)};
}

inline std::pair<EmbeddingVector, EmbeddingVector> random_embedding_pair(SeededRng& rng, std::size_t dim) {
  std::vector<double> a(dim), b(dim);
  for (auto& x : a) x = rng.normal();
  for (auto& x : b) x = rng.normal();
  return {EmbeddingVector(std::move(a)), EmbeddingVector(std::move(b))};
}

// Checks loss_ce and grad_sem_dist against central differences on
// `trials` seeded random instances each.
inline GradientCheckReport run_gradient_check(const GradientCheckOptions& opt) {
  GradientCheckReport report;
  report.trials = opt.trials;
  SeededRng rng(opt.seed);

  for (int trial = 0; trial < opt.trials; ++trial) {
    auto inst = random_ce_instance(rng);
    auto analytic = loss_ce(inst.logits, inst.labels).gradient;
    analytic.values()[0] += opt.inject_fault;
    const auto shape = std::array{inst.logits.batch(), inst.logits.positions(), inst.logits.classes()};
    auto f = [&](std::span<const double> x) {
      LogitsBatch l(shape[0], shape[1], shape[2], std::vector<double>(x.begin(), x.end()));
      return loss_ce(l, inst.labels).value;
    };
    auto x0 = inst.logits.values();
    auto numeric = central_difference(f, {x0.begin(), x0.end()}, opt.step);
    double err = relative_error(analytic.values(), numeric);
    report.worst_ce = std::max(report.worst_ce, err);
    if (!(err <= opt.tolerance)) {
      report.failures.push_back({"loss_ce", trial, err,
                                 {{"shape", shape},
                                  {"logits", std::vector<double>(x0.begin(), x0.end())},
                                  {"labels", inst.labels.ids},
                                  {"class_weights", inst.labels.class_weights}}});
    }
  }

  for (int trial = 0; trial < opt.trials; ++trial) {
    auto [x, y] = random_embedding_pair(rng, 2 + rng.index(15));
    auto analytic = grad_sem_dist(x, y);
    analytic[0] += opt.inject_fault;
    auto f = [&](std::span<const double> v) {
      EmbeddingVector xv(std::vector<double>(v.begin(), v.end()));
      return 1.0 - dot(xv, y) / (xv.norm() * y.norm());
    };
    auto numeric = central_difference(f, {x.values().begin(), x.values().end()}, opt.step);
    double err = relative_error(analytic, numeric);
    report.worst_sem_dist = std::max(report.worst_sem_dist, err);
    if (!(err <= opt.tolerance)) {
      report.failures.push_back({"grad_sem_dist", trial, err,
                                 {{"x", std::vector<double>(x.values().begin(), x.values().end())},
                                  {"y", std::vector<double>(y.values().begin(), y.values().end())}}});
    }
  }
  return report;
}

}  // namespace semantix
