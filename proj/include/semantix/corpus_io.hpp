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
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "semantix/error.hpp"
#include "semantix/random.hpp"

namespace semantix {

struct EvalPair {
  std::string id;
  std::string reference;
  std::string hypothesis;
  std::optional<std::string> dialect;
  std::optional<std::string> dataset;

  friend bool operator==(const EvalPair&, const EvalPair&) = default;
};

using Corpus = std::vector<EvalPair>;

enum class CorpusFormat { tsv, jsonl };

inline CorpusFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return CorpusFormat::jsonl;
  return CorpusFormat::tsv;
}

namespace detail {

inline bool has_visible_text(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
}

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

class CorpusBuilder {
 public:
  explicit CorpusBuilder(std::string path) : path_(std::move(path)) {}

  void add(EvalPair p, std::size_t line) {
    if (p.id.empty()) throw CorpusFormatError(path_, line, "field 'id' is empty");
    if (!has_visible_text(p.reference)) throw CorpusFormatError(path_, line, "field 'reference' is empty");
    if (auto [it, fresh] = first_line_.emplace(p.id, line); !fresh)
      throw CorpusFormatError(path_, line,
                              "duplicate id '" + p.id + "' (first seen on line " + std::to_string(it->second) + ")");
    pairs_.push_back(std::move(p));
  }

  Corpus finish(std::size_t lines) && {
    if (lines == 0) throw CorpusFormatError(path_, 0, "file is empty");
    if (pairs_.empty()) throw CorpusFormatError(path_, lines, "no records");
    return std::move(pairs_);
  }

 private:
  std::string path_;
  Corpus pairs_;
  std::unordered_map<std::string, std::size_t> first_line_;
};

inline Corpus parse_tsv(std::istream& in, const std::string& path) {
  static const std::vector<std::string> kKnown = {"id", "reference", "hypothesis", "dialect", "dataset"};
  CorpusBuilder builder(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  std::map<std::string, std::size_t> col;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      header = split_tabs(line);
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (std::find(kKnown.begin(), kKnown.end(), header[i]) == kKnown.end())
          throw CorpusFormatError(path, 1, "unknown column '" + header[i] + "'");
        if (!col.emplace(header[i], i).second)
          throw CorpusFormatError(path, 1, "column '" + header[i] + "' appears twice");
      }
      for (const char* required : {"id", "reference", "hypothesis"})
        if (!col.count(required)) throw CorpusFormatError(path, 1, std::string("missing column '") + required + "'");
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != header.size())
      throw CorpusFormatError(path, lineno,
                              "expected " + std::to_string(header.size()) + " tab-separated fields, found " +
                                  std::to_string(fields.size()) + " (TSV fields cannot contain tabs; use JSONL)");
    EvalPair p;
    p.id = fields[col["id"]];
    p.reference = fields[col["reference"]];
    p.hypothesis = fields[col["hypothesis"]];
    if (auto it = col.find("dialect"); it != col.end() && !fields[it->second].empty()) p.dialect = fields[it->second];
    if (auto it = col.find("dataset"); it != col.end() && !fields[it->second].empty()) p.dataset = fields[it->second];
    builder.add(std::move(p), lineno);
  }
  return std::move(builder).finish(lineno);
}

inline Corpus parse_jsonl(std::istream& in, const std::string& path) {
  CorpusBuilder builder(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!has_visible_text(line)) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw CorpusFormatError(path, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CorpusFormatError(path, lineno, "record is not a JSON object");
    auto required = [&](const char* key) {
      if (!j.contains(key)) throw CorpusFormatError(path, lineno, std::string("missing field '") + key + "'");
      if (!j[key].is_string()) throw CorpusFormatError(path, lineno, std::string("field '") + key + "' is not a string");
      return j[key].get<std::string>();
    };
    auto optional = [&](const char* key) -> std::optional<std::string> {
      if (!j.contains(key) || j[key].is_null()) return std::nullopt;
      if (!j[key].is_string()) throw CorpusFormatError(path, lineno, std::string("field '") + key + "' is not a string");
      return j[key].get<std::string>();
    };
    EvalPair p{required("id"), required("reference"), required("hypothesis"), optional("dialect"), optional("dataset")};
    builder.add(std::move(p), lineno);
  }
  return std::move(builder).finish(lineno);
}

}  // namespace detail

// Pairs in file order. Errors name the file and line; duplicate ids name both
// lines. A file without records is an error.
inline Corpus load_corpus(std::istream& in, CorpusFormat format, const std::string& name = "<stream>") {
  return format == CorpusFormat::tsv ? detail::parse_tsv(in, name) : detail::parse_jsonl(in, name);
}

inline Corpus load_corpus(const std::filesystem::path& path, std::optional<CorpusFormat> format = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus " + path.string());
  return load_corpus(in, format.value_or(format_from_path(path)), path.string());
}

inline void write_tsv(std::ostream& out, const Corpus& pairs) {
  const bool dialect = std::any_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.dialect.has_value(); });
  const bool dataset = std::any_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.dataset.has_value(); });
  auto check = [](const std::string& s, const std::string& id) {
    if (s.find_first_of("\t\n\r") != std::string::npos)
      throw DataError("pair '" + id + "' has a tab or newline; not representable in TSV");
    return s;
  };
  out << "id\treference\thypothesis" << (dialect ? "\tdialect" : "") << (dataset ? "\tdataset" : "") << '\n';
  for (const auto& p : pairs) {
    out << check(p.id, p.id) << '\t' << check(p.reference, p.id) << '\t' << check(p.hypothesis, p.id);
    if (dialect) out << '\t' << check(p.dialect.value_or(""), p.id);
    if (dataset) out << '\t' << check(p.dataset.value_or(""), p.id);
    out << '\n';
  }
}

inline void write_jsonl(std::ostream& out, const Corpus& pairs) {
  for (const auto& p : pairs) {
    nlohmann::ordered_json j = {{"id", p.id}, {"reference", p.reference}, {"hypothesis", p.hypothesis}};
    if (p.dialect) j["dialect"] = *p.dialect;
    if (p.dataset) j["dataset"] = *p.dataset;
    out << j.dump() << '\n';
  }
}

enum class GroupKey { dialect, dataset };

inline constexpr const char* kUnknownGroup = "unknown";

// Partition by key; pairs without the key land in "unknown". Input order is
// kept within each group.
inline std::map<std::string, Corpus> group_by(const Corpus& pairs, GroupKey key) {
  std::map<std::string, Corpus> groups;
  for (const auto& p : pairs) {
    const auto& v = key == GroupKey::dialect ? p.dialect : p.dataset;
    groups[v.value_or(kUnknownGroup)].push_back(p);
  }
  return groups;
}

struct CorpusSplit {
  Corpus train;
  Corpus test;
};

// Seeded random hold-out: round(fraction * n) pairs go to test. Both halves
// keep the original relative order.
inline CorpusSplit random_split(const Corpus& pairs, std::uint64_t seed, double test_fraction = 0.2) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) throw RangeError("test fraction must lie in [0, 1]");
  std::vector<std::size_t> idx(pairs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  SeededRng rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(pairs.size())));
  std::vector<bool> is_test(pairs.size(), false);
  for (std::size_t k = 0; k < n_test; ++k) is_test[idx[k]] = true;
  CorpusSplit split;
  for (std::size_t i = 0; i < pairs.size(); ++i) (is_test[i] ? split.test : split.train).push_back(pairs[i]);
  return split;
}

}  // namespace semantix
