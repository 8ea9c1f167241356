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
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "semantix/bleu.hpp"
#include "semantix/corpus_io.hpp"
#include "semantix/edit_metrics.hpp"
#include "semantix/embedding.hpp"
#include "semantix/losses.hpp"
#include "semantix/normalizer.hpp"
#include "semantix/stats.hpp"

namespace semantix {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct MetricSet {
  bool wer = false;
  bool cer = false;
  bool bleu = false;
  bool semdist = false;

  static MetricSet all() { return {true, true, true, true}; }

  // Comma-separated subset of wer, cer, bleu, semdist.
  static MetricSet parse(std::string_view list) {
    MetricSet m;
    std::size_t start = 0;
    while (start <= list.size()) {
      auto comma = list.find(',', start);
      auto name = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (name == "wer") m.wer = true;
      else if (name == "cer") m.cer = true;
      else if (name == "bleu") m.bleu = true;
      else if (name == "semdist") m.semdist = true;
      else throw RangeError("unknown metric '" + std::string(name) + "' (expected wer, cer, bleu, semdist)");
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!m.any()) throw RangeError("no metrics requested");
    return m;
  }

  bool any() const { return wer || cer || bleu || semdist; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    if (wer) out.push_back("wer");
    if (cer) out.push_back("cer");
    if (bleu) out.push_back("bleu");
    if (semdist) out.push_back("semdist");
    return out;
  }
};

struct ReportOptions {
  MetricSet metrics = MetricSet::parse("wer,cer,bleu");
  // Applied to WER/CER/BLEU inputs only; SemDist always sees the raw text.
  std::optional<NormalizationConfig> normalization = NormalizationConfig{};
  BleuConfig bleu;
  std::optional<GroupKey> group_by;
  double significance_level = 0.05;
  unsigned jobs = 1;
};

struct PairMetrics {
  std::string id;
  std::optional<double> wer;
  std::optional<double> cer;
  std::optional<double> bleu_sentence;
  std::optional<double> semdist;
  EditStats word_edits;
  EditStats char_edits;
  BleuStats bleu_stats;

  std::optional<double> semdist_x100() const {
    return semdist ? std::optional<double>(100.0 * *semdist) : std::nullopt;
  }
};

struct CorpusMetrics {
  std::size_t pairs = 0;
  std::optional<double> wer;
  std::optional<double> cer;
  std::optional<double> bleu_corpus;
  std::optional<double> mean_semdist;
  EditStats word_edits;
  EditStats char_edits;

  std::optional<double> mean_semdist_x100() const {
    return mean_semdist ? std::optional<double>(100.0 * *mean_semdist) : std::nullopt;
  }
};

struct CorrelationEntry {
  std::string metric_a;
  std::string metric_b;
  double pearson_r;
  double p_value;
  std::size_t n;
};

struct MetricReport {
  std::vector<PairMetrics> per_pair;
  CorpusMetrics corpus;
  std::optional<std::string> group_key;
  std::map<std::string, CorpusMetrics> groups;
  std::vector<CorrelationEntry> correlations;
  nlohmann::ordered_json metadata;
};

// Pooled corpus block over a subset of per-pair rows.
inline CorpusMetrics aggregate(const std::vector<const PairMetrics*>& rows, const ReportOptions& opt) {
  CorpusMetrics c;
  c.pairs = rows.size();
  BleuStats bleu(opt.bleu.max_ngram_order);
  std::vector<double> sd;
  for (const auto* r : rows) {
    c.word_edits += r->word_edits;
    c.char_edits += r->char_edits;
    if (opt.metrics.bleu) bleu += r->bleu_stats;
    if (r->semdist) sd.push_back(*r->semdist);
  }
  if (rows.empty()) return c;
  if (opt.metrics.wer) c.wer = error_rate(c.word_edits);
  if (opt.metrics.cer) c.cer = error_rate(c.char_edits);
  if (opt.metrics.bleu) c.bleu_corpus = bleu_from_stats(bleu, opt.bleu);
  if (opt.metrics.semdist) c.mean_semdist = pairwise_sum(sd) / static_cast<double>(sd.size());
  return c;
}

namespace detail {

template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += jobs) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline nlohmann::ordered_json normalization_json(const std::optional<NormalizationConfig>& n) {
  if (!n) return {{"enabled", false}};
  return {{"enabled", true},
          {"lowercase", n->lowercase},
          {"allowed_charset", n->allowed_charset.describe()},
          {"spell_numbers", n->spell_numbers},
          {"collapse_whitespace", n->collapse_whitespace},
          {"applies_to", {"wer", "cer", "bleu"}}};
}

}  // namespace detail

// Computes the requested metrics per pair and pooled over the corpus (and per
// group), then Pearson correlations between every pair of per-pair metric
// columns. Errors are rethrown with the offending pair id.
inline MetricReport build_report(const Corpus& pairs, const ReportOptions& opt,
                                 EmbeddingProvider* provider = nullptr) {
  if (pairs.empty()) throw DataError("cannot build a report for an empty corpus");
  if (!opt.metrics.any()) throw RangeError("no metrics requested");
  if (opt.metrics.semdist && provider == nullptr) throw RangeError("semdist requested without an embedding provider");
  if (!opt.metrics.semdist && provider != nullptr) throw RangeError("embedding provider given but semdist not requested");
  opt.bleu.validate();

  MetricReport report;
  report.per_pair.resize(pairs.size());
  std::vector<std::size_t> unspelled(pairs.size(), 0);

  detail::parallel_for(pairs.size(), opt.jobs, [&](std::size_t i) {
    const EvalPair& p = pairs[i];
    PairMetrics& m = report.per_pair[i];
    m.id = p.id;
    try {
      std::string ref = p.reference;
      std::string hyp = p.hypothesis;
      if (opt.normalization) {
        auto r = normalize_counted(ref, *opt.normalization);
        auto h = normalize_counted(hyp, *opt.normalization);
        unspelled[i] = r.unspelled_numbers + h.unspelled_numbers;
        ref = std::move(r.text);
        hyp = std::move(h.text);
      }
      if (opt.metrics.wer) {
        m.word_edits = edit_stats(ref, hyp, ErrorLevel::word);
        m.wer = error_rate(m.word_edits);
      }
      if (opt.metrics.cer) {
        m.char_edits = edit_stats(ref, hyp, ErrorLevel::character);
        m.cer = error_rate(m.char_edits);
      }
      if (opt.metrics.bleu) {
        m.bleu_stats = bleu_stats(ref, hyp, opt.bleu);
        m.bleu_sentence = bleu_from_stats(m.bleu_stats, opt.bleu);
      }
    } catch (const DataError& e) {
      throw DataError("pair '" + p.id + "': " + e.what());
    }
  });

  if (opt.metrics.semdist) {
    std::vector<std::string> refs, hyps;
    refs.reserve(pairs.size());
    hyps.reserve(pairs.size());
    for (const auto& p : pairs) {
      refs.push_back(p.reference);
      hyps.push_back(p.hypothesis);
    }
    auto x = embed(refs, *provider);
    auto y = embed(hyps, *provider);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      try {
        report.per_pair[i].semdist = sem_dist(x[i], y[i]);
      } catch (const DataError& e) {
        throw DataError("pair '" + pairs[i].id + "': " + e.what());
      }
    }
  }

  std::vector<const PairMetrics*> all_rows;
  for (const auto& r : report.per_pair) all_rows.push_back(&r);
  report.corpus = aggregate(all_rows, opt);

  if (opt.group_by) {
    report.group_key = *opt.group_by == GroupKey::dialect ? "dialect" : "dataset";
    std::map<std::string, std::vector<const PairMetrics*>> members;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& key = *opt.group_by == GroupKey::dialect ? pairs[i].dialect : pairs[i].dataset;
      members[key.value_or(kUnknownGroup)].push_back(&report.per_pair[i]);
    }
    for (const auto& [key, rows] : members) report.groups.emplace(key, aggregate(rows, opt));
  }

  struct Column {
    std::string name;
    std::vector<double> values;
  };
  std::vector<Column> columns;
  auto column = [&](const char* name, auto getter) {
    Column c{name, {}};
    for (const auto& r : report.per_pair) c.values.push_back(*getter(r));
    columns.push_back(std::move(c));
  };
  if (opt.metrics.wer) column("wer", [](const PairMetrics& r) { return r.wer; });
  if (opt.metrics.cer) column("cer", [](const PairMetrics& r) { return r.cer; });
  if (opt.metrics.bleu) column("bleu", [](const PairMetrics& r) { return r.bleu_sentence; });
  if (opt.metrics.semdist) column("semdist", [](const PairMetrics& r) { return r.semdist; });

  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < columns.size(); ++a) {
    for (std::size_t b = a + 1; b < columns.size(); ++b) {
      try {
        auto res = pearson_with_p(columns[a].values, columns[b].values);
        report.correlations.push_back({columns[a].name, columns[b].name, res.r, res.p, res.n});
      } catch (const DataError& e) {
        skipped.push_back({{"metric_a", columns[a].name}, {"metric_b", columns[b].name}, {"reason", e.what()}});
      }
    }
  }

  std::size_t total_unspelled = 0;
  for (auto u : unspelled) total_unspelled += u;

  auto& md = report.metadata;
  md["tool"] = "semantix";
  md["version"] = kToolVersion;
  md["metrics"] = opt.metrics.names();
  md["normalization"] = detail::normalization_json(opt.normalization);
  md["semdist_text"] = "unnormalized";
  md["embedder"] = provider ? nlohmann::ordered_json(provider->name()) : nlohmann::ordered_json(nullptr);
  md["semdist_scale"] = "semdist in [0, 2]; semdist_x100 = 100 * semdist";
  md["error_rate_pooling"] = "total edits / total reference length";
  md["cer_units"] = "code points of whitespace-collapsed text, spaces included";
  md["bleu"] = opt.bleu.describe();
  md["correlation_test"] = "pearson r, two-sided t-test with n-2 degrees of freedom";
  md["significance_level"] = opt.significance_level;
  md["unspelled_numbers"] = total_unspelled;
  md["correlations_skipped"] = std::move(skipped);
  return report;
}

namespace detail {

// Six significant digits, the precision of every number in written reports.
inline double round6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

inline nlohmann::ordered_json num(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return round6(*v);
}

inline std::string fmt6(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

inline nlohmann::ordered_json corpus_json(const CorpusMetrics& c) {
  return {{"pairs", c.pairs},
          {"wer", num(c.wer)},
          {"cer", num(c.cer)},
          {"bleu_corpus", num(c.bleu_corpus)},
          {"mean_semdist", num(c.mean_semdist)},
          {"mean_semdist_x100", num(c.mean_semdist_x100())},
          {"word_errors", c.word_edits.distance()},
          {"reference_words", c.word_edits.reference_length},
          {"char_errors", c.char_edits.distance()},
          {"reference_chars", c.char_edits.reference_length}};
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["metadata"] = r.metadata;
  auto& rows = j["per_pair"] = nlohmann::ordered_json::array();
  for (const auto& p : r.per_pair) {
    rows.push_back({{"id", p.id},
                    {"wer", detail::num(p.wer)},
                    {"cer", detail::num(p.cer)},
                    {"bleu_sentence", detail::num(p.bleu_sentence)},
                    {"semdist", detail::num(p.semdist)},
                    {"semdist_x100", detail::num(p.semdist_x100())},
                    {"word_errors", p.word_edits.distance()},
                    {"reference_words", p.word_edits.reference_length},
                    {"char_errors", p.char_edits.distance()},
                    {"reference_chars", p.char_edits.reference_length}});
  }
  j["corpus"] = detail::corpus_json(r.corpus);
  if (r.group_key) {
    j["group_key"] = *r.group_key;
    auto& g = j["groups"] = nlohmann::ordered_json::object();
    for (const auto& [key, block] : r.groups) g[key] = detail::corpus_json(block);
  } else {
    j["group_key"] = nullptr;
    j["groups"] = nullptr;
  }
  const double alpha = r.metadata.value("significance_level", 0.05);
  auto& corr = j["correlations"] = nlohmann::ordered_json::array();
  for (const auto& c : r.correlations) {
    corr.push_back({{"metric_a", c.metric_a},
                    {"metric_b", c.metric_b},
                    {"pearson_r", detail::round6(c.pearson_r)},
                    {"p_value", detail::round6(c.p_value)},
                    {"n", c.n},
                    {"significant", c.p_value < alpha}});
  }
  return j;
}

// Aligned plain-text rendering of the same content.
inline std::string report_to_text(const MetricReport& r) {
  std::ostringstream out;
  std::vector<std::vector<std::string>> table = {{"id", "wer", "cer", "bleu", "semdist", "semdist_x100"}};
  for (const auto& p : r.per_pair)
    table.push_back({p.id, detail::fmt6(p.wer), detail::fmt6(p.cer), detail::fmt6(p.bleu_sentence),
                     detail::fmt6(p.semdist), detail::fmt6(p.semdist_x100())});
  auto block_row = [](const std::string& label, const CorpusMetrics& c) {
    return std::vector<std::string>{label, detail::fmt6(c.wer), detail::fmt6(c.cer), detail::fmt6(c.bleu_corpus),
                                    detail::fmt6(c.mean_semdist), detail::fmt6(c.mean_semdist_x100())};
  };
  const std::size_t separator = table.size();
  table.push_back(block_row("CORPUS (" + std::to_string(r.corpus.pairs) + ")", r.corpus));
  for (const auto& [key, block] : r.groups)
    table.push_back(block_row(*r.group_key + "=" + key + " (" + std::to_string(block.pairs) + ")", block));

  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], utf8::decode(row[c]).size());
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::size_t pad = width[c] - utf8::decode(row[c]).size();
      if (c == 0) line += row[c] + std::string(pad, ' ');
      else line += "  " + std::string(pad, ' ') + row[c];
    }
    out << line << '\n';
  };
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i == 1 || i == separator) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
    emit(table[i]);
  }

  if (!r.correlations.empty()) {
    out << "\ncorrelations (" << r.metadata.value("correlation_test", std::string()) << ")\n";
    for (const auto& c : r.correlations)
      out << "  " << c.metric_a << " ~ " << c.metric_b << ": r=" << detail::fmt6(c.pearson_r)
          << " p=" << detail::fmt6(c.p_value) << " n=" << c.n << '\n';
  }
  out << "\nnormalization: " << (r.metadata["normalization"].value("enabled", false) ? "on" : "off")
      << "; semdist on unnormalized text; bleu " << r.metadata.value("bleu", std::string()) << '\n';
  return out.str();
}

}  // namespace semantix
