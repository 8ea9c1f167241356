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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "semantix/corpus_io.hpp"

namespace semantix {
namespace {

Corpus tsv(const std::string& s) {
  std::istringstream in(s);
  return load_corpus(in, CorpusFormat::tsv, "test.tsv");
}

Corpus jsonl(const std::string& s) {
  std::istringstream in(s);
  return load_corpus(in, CorpusFormat::jsonl, "test.jsonl");
}

template <typename F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const CorpusFormatError& e) {
    return e.what();
  }
  return "<no error>";
}

TEST(Tsv, LoadsRequiredAndOptionalColumns) {
  auto c = tsv("id\treference\thypothesis\tdialect\r\na\tder hund\tden hund\tBE\r\n\nb\tja\t\t\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (EvalPair{"a", "der hund", "den hund", "BE", std::nullopt}));
  EXPECT_EQ(c[1].hypothesis, "");
  EXPECT_FALSE(c[1].dialect.has_value());
}

TEST(Tsv, ColumnOrderIsFree) {
  auto c = tsv("hypothesis\tid\treference\nh\ti\tr\n");
  EXPECT_EQ(c[0], (EvalPair{"i", "r", "h", std::nullopt, std::nullopt}));
}

TEST(Tsv, ErrorsNameFileAndLine) {
  EXPECT_NE(error_of([] { tsv("id\treference\thypothesis\na\tb\n"); }).find("test.tsv:2"), std::string::npos);
  EXPECT_NE(error_of([] { tsv("id\treference\thypothesis\na\t\"x\ty\"\tz\n"); }).find("cannot contain tabs"),
            std::string::npos);
  EXPECT_NE(error_of([] { tsv("id\treference\n"); }).find("missing column 'hypothesis'"), std::string::npos);
  EXPECT_NE(error_of([] { tsv("id\treference\thypothesis\tspeaker\n"); }).find("unknown column"),
            std::string::npos);
  EXPECT_NE(error_of([] { tsv(""); }).find("empty"), std::string::npos);
  EXPECT_NE(error_of([] { tsv("id\treference\thypothesis\n"); }).find("no records"), std::string::npos);
  EXPECT_NE(error_of([] { tsv("id\treference\thypothesis\n\tr\th\n"); }).find("'id' is empty"), std::string::npos);
  EXPECT_NE(error_of([] { tsv("id\treference\thypothesis\na\t  \th\n"); }).find("'reference' is empty"),
            std::string::npos);
}

TEST(Tsv, DuplicateIdsNameBothLines) {
  auto msg = error_of([] { tsv("id\treference\thypothesis\na\tr\th\nb\tr\th\na\tr\th\n"); });
  EXPECT_NE(msg.find("test.tsv:4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("first seen on line 2"), std::string::npos) << msg;
}

TEST(Jsonl, LoadsAndValidates) {
  auto c = jsonl(R"({"id": "x", "reference": "a\tb", "hypothesis": "c", "dataset": null})"
                 "\n\n"
                 R"({"id": "y", "reference": "d", "hypothesis": "", "dialect": "ZH"})");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].reference, "a\tb");
  EXPECT_FALSE(c[0].dataset.has_value());
  EXPECT_EQ(c[1].dialect, "ZH");
  EXPECT_NE(error_of([] { jsonl(R"({"id": "x", "reference": "a"})"); }).find("missing field 'hypothesis'"),
            std::string::npos);
  EXPECT_NE(error_of([] { jsonl(R"({"id": 1, "reference": "a", "hypothesis": "b"})"); }).find("not a string"),
            std::string::npos);
  EXPECT_NE(error_of([] { jsonl("{\"id\": \"x\",\n"); }).find("test.jsonl:1"), std::string::npos);
  EXPECT_NE(error_of([] { jsonl("[1, 2]"); }).find("not a JSON object"), std::string::npos);
}

TEST(CorpusFiles, FormatFromExtensionAndMissingFile) {
  EXPECT_EQ(format_from_path("a/b.jsonl"), CorpusFormat::jsonl);
  EXPECT_EQ(format_from_path("a/b.tsv"), CorpusFormat::tsv);
  EXPECT_THROW(load_corpus(std::filesystem::path("/nonexistent/corpus.tsv")), DataError);
}

TEST(CorpusRoundTrip, TsvAndJsonlPreservePairs) {
  Corpus c = {{"1", "grüezi mitenand", "grüezi mitenand", "BE", "sds"},
              {"2", "am 22. Mai", "am zweiundzwanzigsten mai", std::nullopt, "swiss"},
              {"3", "x", "", "ZH", std::nullopt}};
  std::ostringstream t, j;
  write_tsv(t, c);
  write_jsonl(j, c);
  EXPECT_EQ(tsv(t.str()), c);
  EXPECT_EQ(jsonl(j.str()), c);

  Corpus bad = {{"1", "a\tb", "c", std::nullopt, std::nullopt}};
  std::ostringstream sink;
  EXPECT_THROW(write_tsv(sink, bad), DataError);
}

Corpus synthetic(std::size_t n) {
  static const std::vector<std::string> dialects = {"AG", "BE", "BS", "GR", "LU", "SG", "VS", "ZH"};
  Corpus c;
  for (std::size_t i = 0; i < n; ++i) {
    EvalPair p{"p" + std::to_string(i), "ref " + std::to_string(i), "hyp", std::nullopt, std::nullopt};
    if (i % 9 != 0) p.dialect = dialects[i % dialects.size()];
    c.push_back(p);
  }
  return c;
}

TEST(GroupBy, PartitionsInOrderWithUnknownBucket) {
  auto c = synthetic(100);
  auto groups = group_by(c, GroupKey::dialect);
  EXPECT_EQ(groups.size(), 9u);
  ASSERT_TRUE(groups.count(kUnknownGroup));
  std::size_t total = 0;
  std::set<std::string> ids;
  for (const auto& [key, members] : groups) {
    total += members.size();
    for (std::size_t i = 0; i < members.size(); ++i) {
      ids.insert(members[i].id);
      EXPECT_EQ(members[i].dialect.value_or(kUnknownGroup), key);
      if (i > 0) {
        EXPECT_LT(std::stoi(members[i - 1].id.substr(1)), std::stoi(members[i].id.substr(1)));
      }
    }
  }
  EXPECT_EQ(total, c.size());
  EXPECT_EQ(ids.size(), c.size());
  EXPECT_EQ(group_by(c, GroupKey::dataset).size(), 1u);
}

TEST(RandomSplit, SeededDisjointAndOrdered) {
  auto c = synthetic(50);
  auto a = random_split(c, 7), b = random_split(c, 7), other = random_split(c, 8);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.train, b.train);
  EXPECT_NE(a.test, other.test);
  EXPECT_EQ(a.test.size(), 10u);
  EXPECT_EQ(a.train.size() + a.test.size(), c.size());
  std::set<std::string> seen;
  for (const auto& p : a.train) seen.insert(p.id);
  for (const auto& p : a.test) EXPECT_FALSE(seen.count(p.id));
  EXPECT_THROW(random_split(c, 1, 1.5), RangeError);
  EXPECT_EQ(random_split(c, 1, 0.0).train, c);
}

}  // namespace
}  // namespace semantix
