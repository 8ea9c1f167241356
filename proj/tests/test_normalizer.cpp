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

#include "fuzz_text.hpp"
#include "semantix/normalizer.hpp"

namespace semantix {
namespace {

const NormalizationConfig kDefault{};

TEST(SpellNumberDe, MatchesNumeralTable) {
  // Standard German cardinals, compound spelling.
  const std::vector<std::pair<std::uint64_t, std::string>> table = {
      {0, "null"},
      {1, "eins"},
      {2, "zwei"},
      {7, "sieben"},
      {11, "elf"},
      {12, "zwölf"},
      {13, "dreizehn"},
      {16, "sechzehn"},
      {17, "siebzehn"},
      {20, "zwanzig"},
      {21, "einundzwanzig"},
      {30, "dreißig"},
      {52, "zweiundfünfzig"},
      {67, "siebenundsechzig"},
      {99, "neunundneunzig"},
      {100, "einhundert"},
      {101, "einhunderteins"},
      {111, "einhundertelf"},
      {200, "zweihundert"},
      {999, "neunhundertneunundneunzig"},
      {1000, "eintausend"},
      {1001, "eintausendeins"},
      {2024, "zweitausendvierundzwanzig"},
      {10000, "zehntausend"},
      {21000, "einundzwanzigtausend"},
      {101000, "einhunderteintausend"},
      {999999, "neunhundertneunundneunzigtausendneunhundertneunundneunzig"},
  };
  for (const auto& [n, word] : table) EXPECT_EQ(spell_number_de(n), word) << n;
}

TEST(SpellNumberDe, RejectsOutOfRange) {
  EXPECT_THROW(spell_number_de(1000000), RangeError);
  EXPECT_NO_THROW(spell_number_de(kMaxSpelledNumber));
}

TEST(SpellNumberDe, InjectiveOnFirstTenThousand) {
  std::set<std::string> seen;
  for (std::uint64_t n = 0; n <= 9999; ++n) ASSERT_TRUE(seen.insert(spell_number_de(n)).second) << n;
}

TEST(SpellNumberDe, InjectiveOnSampledUpperRange) {
  std::set<std::string> seen;
  SeededRng rng(7);
  std::set<std::uint64_t> picked;
  while (picked.size() < 20000) picked.insert(rng.index(kMaxSpelledNumber + 1));
  for (auto n : picked) ASSERT_TRUE(seen.insert(spell_number_de(n)).second) << n;
}

TEST(Normalize, ExampleSentences) {
  EXPECT_EQ(normalize("Boeing lehnte eine Stellungnahme ab.", kDefault), "boeing lehnte eine stellungnahme ab");
  EXPECT_EQ(normalize("", kDefault), "");
  EXPECT_EQ(normalize("52", kDefault), "zweiundfünfzig");
  EXPECT_EQ(normalize("Inzwischen ist es kurz vor 22 Uhr.", kDefault),
            "inzwischen ist es kurz vor zweiundzwanzig uhr");
}

TEST(Normalize, SharpSBecomesDoubleS) {
  EXPECT_EQ(normalize("Die Straße", kDefault), "die strasse");
  EXPECT_EQ(normalize("30", kDefault), "dreissig");
  EXPECT_EQ(normalize("GRO\u1e9e", kDefault), "gross");
}

TEST(Normalize, CombiningUmlautsCompose) {
  EXPECT_EQ(normalize("A\u0308pfel und \u00c4pfel", kDefault), "\u00e4pfel und \u00e4pfel");
  EXPECT_EQ(normalize("U\u0308ber", kDefault), "\u00fcber");
  EXPECT_EQ(normalize("Cafe\u0301 Cre\u0300me", kDefault), "cafe creme");
  EXPECT_EQ(normalize("Caf\u00e9", kDefault), "cafe");
}

TEST(Normalize, NumeralRules) {
  EXPECT_EQ(normalize("am 22. Mai", kDefault), "am zweiundzwanzig mai");
  EXPECT_EQ(normalize("22Uhr", kDefault), "zweiundzwanzig uhr");
  EXPECT_EQ(normalize("007", kDefault), "sieben");
  auto decimal = normalize_counted("3,5 Liter", kDefault);
  EXPECT_EQ(decimal.text, "liter");
  EXPECT_EQ(decimal.unspelled_numbers, 1u);
  auto large = normalize_counted("1234567 Franken", kDefault);
  EXPECT_EQ(large.text, "franken");
  EXPECT_EQ(large.unspelled_numbers, 1u);
}

TEST(Normalize, FilteringCannotExposeUnspelledNumerals) {
  // Digits allowed, comma not: "7,1" is left as a decimal, then loses its
  // comma. The resulting integer is spelled so the output is stable.
  NormalizationConfig cfg = kDefault;
  cfg.allowed_charset = Charset::of(U"abcdefghijklmnopqrstuvwxyz0123456789");
  auto r = normalize_counted("Preis 7,1 Franken", cfg);
  EXPECT_EQ(r.text, "preis einundsiebzig franken");
  EXPECT_EQ(r.unspelled_numbers, 1u);
  EXPECT_EQ(normalize(r.text, cfg), r.text);
}

TEST(Normalize, WhitespaceIsCollapsedNotDropped) {
  EXPECT_EQ(normalize("  a\tb  c  ", kDefault), "a b c");
  EXPECT_EQ(normalize("a - b", kDefault), "a b");
}

TEST(Normalize, FlagsAreIndependent) {
  NormalizationConfig keep_case = kDefault;
  keep_case.lowercase = false;
  keep_case.allowed_charset = Charset::of(U"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZäöüÄÖÜ");
  EXPECT_EQ(normalize("Ärger um 5 Uhr!", keep_case), "Ärger um fünf Uhr");

  NormalizationConfig digits = kDefault;
  digits.spell_numbers = false;
  digits.allowed_charset = Charset::of(U"abcdefghijklmnopqrstuvwxyzäöü0123456789");
  EXPECT_EQ(normalize("Gleis 7.", digits), "gleis 7");
}

TEST(Charset, AlwaysContainsSpace) {
  EXPECT_TRUE(Charset::of(U"abc").contains(U' '));
  EXPECT_TRUE(Charset::german().contains(U' '));
  EXPECT_TRUE(Charset::parse("xyz").contains(U' '));
  EXPECT_TRUE(Charset::parse("all").unrestricted());
  EXPECT_FALSE(Charset::german().contains(U'ß'));
}

TEST(NormalizeProperty, IdentityConfigIsIdentity) {
  SeededRng rng(11);
  const auto id = NormalizationConfig::identity();
  for (int i = 0; i < 2000; ++i) {
    auto t = testing::fuzz_text(rng);
    ASSERT_EQ(normalize(t, id), t);
  }
}

TEST(NormalizeProperty, IdempotentAndClosedUnderSeveralConfigs) {
  std::vector<NormalizationConfig> configs = {kDefault};
  NormalizationConfig no_collapse = kDefault;
  no_collapse.collapse_whitespace = false;
  configs.push_back(no_collapse);
  NormalizationConfig no_lower = kDefault;
  no_lower.lowercase = false;
  configs.push_back(no_lower);
  NormalizationConfig with_digits = kDefault;
  with_digits.allowed_charset = Charset::of(U"abcdefghijklmnopqrstuvwxyzäöüß0123456789");
  configs.push_back(with_digits);

  SeededRng rng(12);
  for (const auto& cfg : configs) {
    for (int i = 0; i < 2000; ++i) {
      const auto t = testing::fuzz_text(rng);
      const auto once = normalize(t, cfg);
      ASSERT_EQ(normalize(once, cfg), once) << t;
      for (char32_t c : utf8::decode(once)) ASSERT_TRUE(cfg.allowed_charset.contains(c)) << t;
      if (cfg.collapse_whitespace) {
        ASSERT_EQ(once.find("  "), std::string::npos);
        ASSERT_TRUE(once.empty() || (once.front() != ' ' && once.back() != ' '));
      }
    }
  }
}

}  // namespace
}  // namespace semantix
