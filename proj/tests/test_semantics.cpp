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

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "fake_embed_server.hpp"
#include "semantix/embedding.hpp"
#include "semantix/embedding_cache.hpp"
#include "semantix/http_embedder.hpp"
#include "semantix/losses.hpp"
#include "semantix/random.hpp"
#include "example_pairs.hpp"

namespace semantix {
namespace {

namespace fs = std::filesystem;

EmbeddingVector vec(std::vector<double> v) { return EmbeddingVector(std::move(v)); }

fs::path temp_path(const std::string& name) {
  auto dir = fs::temp_directory_path() / "semantix_tests";
  fs::create_directories(dir);
  auto p = dir / (name + "_" + std::to_string(::getpid()));
  fs::remove(p);
  return p;
}

TEST(SemDist, Anchors) {
  EXPECT_NEAR(sem_dist(vec({1, 2, 3}), vec({1, 2, 3})), 0.0, 1e-12);
  EXPECT_NEAR(sem_dist(vec({1, 0}), vec({0, 1})), 1.0, 1e-12);
  EXPECT_NEAR(sem_dist(vec({1, -2, 3}), vec({-1, 2, -3})), 2.0, 1e-12);
}

TEST(SemDist, Errors) {
  EXPECT_THROW(sem_dist(vec({1, 0}), vec({1, 0, 0})), DataError);
  EXPECT_THROW(vec({0, 0, 0}), DataError);
  EXPECT_THROW(vec({}), DataError);
  EXPECT_THROW(vec({1, std::nan("")}), DataError);
}

TEST(SemDistProperty, ScaleInvariantSymmetricBounded) {
  SeededRng rng(31);
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 1 + rng.index(12);
    std::vector<double> a(d), b(d);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    const auto x = vec(a), y = vec(b);
    const double base = sem_dist(x, y);
    ASSERT_GE(base, -1e-9);
    ASSERT_LE(base, 2.0 + 1e-9);
    ASSERT_NEAR(sem_dist(y, x), base, 1e-12);
    const double s = std::exp(rng.uniform(-5, 5)), t = std::exp(rng.uniform(-5, 5));
    for (auto& v : a) v *= s;
    for (auto& v : b) v *= t;
    ASSERT_NEAR(sem_dist(vec(a), vec(b)), base, 1e-9);
  }
}

TEST(TestHashEmbed, ShapeAndDeterminism) {
  auto v = test_hash_embed("Boeing lehnte eine Stellungnahme ab.");
  EXPECT_EQ(v.dim(), 256u);
  EXPECT_NEAR(v.norm(), 1.0, 1e-6);
  EXPECT_EQ(v, test_hash_embed("Boeing lehnte eine Stellungnahme ab."));
  TestHashEmbedder p;
  std::vector<std::string> xx = {"x", "x"};
  auto out = embed(xx, p);
  EXPECT_EQ(out[0], out[1]);
}

TEST(TestHashEmbed, FixedHash) {
  // FNV-1a 64 of "abc" is 0xe71fa2190541574b, bucket 0x4b.
  EXPECT_EQ(fnv1a64("abc"), 0xe71fa2190541574bULL);
  auto v = test_hash_embed("abc");
  for (std::size_t i = 0; i < v.dim(); ++i) EXPECT_EQ(v[i], i == 75 ? 1.0 : 0.0) << i;
}

TEST(TestHashEmbed, DegenerateAndPrefixedInputs) {
  auto e = test_hash_embed("");
  EXPECT_EQ(e[0], 1.0);
  EXPECT_EQ(e.norm(), 1.0);
  // Independent Python computation (tests/oracles/oracles.py).
  EXPECT_NEAR(sem_dist(test_hash_embed("abc"), test_hash_embed("the quick brown fox jumps abc")),
              0.8259223440443022, 1e-9);
}

TEST(Embed, RejectsEmptyInput) {
  TestHashEmbedder p;
  EXPECT_THROW(embed(std::span<const std::string>{}, p), DataError);
}

TEST(EmbeddingCache, HeaderLayoutIsExact) {
  auto path = temp_path("layout.smxe");
  {
    auto cache = EmbeddingCache::open(path);
    cache.bind("p", 2);
    cache.append("hi", vec({1.0, -0.5}));
  }
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string expected = std::string("SMXE") + std::string("\x01\x00\x00\x00", 4) +
                               std::string("\x01\x00\x00\x00", 4) + "p" + std::string("\x02\x00\x00\x00", 4);
  ASSERT_GE(bytes.size(), expected.size());
  EXPECT_EQ(bytes.substr(0, expected.size()), expected);
  std::string record;
  const std::uint64_t h = fnv1a64("hi");
  for (int i = 0; i < 8; ++i) record.push_back(static_cast<char>((h >> (8 * i)) & 0xFF));
  record += std::string("\x02\x00\x00\x00", 4) + "hi";
  record += std::string("\x00\x00\x80\x3f", 4);  // 1.0f
  record += std::string("\x00\x00\x00\xbf", 4);  // -0.5f
  EXPECT_EQ(bytes.substr(expected.size()), record);
}

TEST(EmbeddingCache, RoundTripIsBitExact) {
  auto path = temp_path("roundtrip.smxe");
  TestHashEmbedder direct;
  std::vector<std::string> texts(testing::kExamplePairs.size());
  for (std::size_t i = 0; i < texts.size(); ++i) texts[i] = testing::kExamplePairs[i].first;
  {
    CachedEmbedder cached(EmbeddingCache::open(path), std::make_shared<TestHashEmbedder>());
    EXPECT_EQ(cached.fill(texts), texts.size());
  }
  CachedEmbedder reopened(EmbeddingCache::open(path));
  EXPECT_EQ(reopened.name(), "test-hash");
  auto a = reopened.embed(texts);
  auto b = direct.embed(texts);
  for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(EmbeddingCache, CorruptionNamesTheFile) {
  auto path = temp_path("corrupt.smxe");
  {
    auto cache = EmbeddingCache::open(path);
    cache.bind("p", 2);
    cache.append("hello", vec({1.0, 2.0}));
  }
  auto expect_error = [&](const std::string& needle) {
    try {
      EmbeddingCache::open(path);
      FAIL() << "expected CacheError";
    } catch (const CacheError& e) {
      EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  auto size = fs::file_size(path);
  fs::resize_file(path, size - 3);
  expect_error("truncated");

  fs::resize_file(path, size);
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(static_cast<std::streamoff>(size - 8 - 5));  // a byte of the text
    f.put('X');
  }
  expect_error("hash");

  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.put('Z');
  }
  expect_error("magic");
}

TEST(EmbeddingCache, RefusesToMixProviders) {
  auto path = temp_path("mix.smxe");
  {
    CachedEmbedder c(EmbeddingCache::open(path), std::make_shared<TestHashEmbedder>());
    std::vector<std::string> t = {"abc"};
    c.fill(t);
  }
  struct Other final : EmbeddingProvider {
    std::string name() const override { return "other"; }
    std::size_t dim() const override { return 256; }
    std::vector<EmbeddingVector> embed(std::span<const std::string> t) override {
      return std::vector<EmbeddingVector>(t.size(), test_hash_embed("z"));
    }
  };
  EXPECT_THROW(CachedEmbedder(EmbeddingCache::open(path), std::make_shared<Other>()), CacheError);
}

TEST(EmbeddingCache, CacheOnlyMissIsProviderError) {
  auto path = temp_path("miss.smxe");
  {
    CachedEmbedder c(EmbeddingCache::open(path), std::make_shared<TestHashEmbedder>());
    std::vector<std::string> t = {"abc"};
    c.fill(t);
  }
  CachedEmbedder ro(EmbeddingCache::open(path));
  std::vector<std::string> miss = {"abc", "not cached"};
  try {
    ro.embed(miss);
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_FALSE(e.retryable());
  }
  EXPECT_THROW(CachedEmbedder(EmbeddingCache::open(temp_path("absent.smxe"))), CacheError);
}

TEST(HttpEmbedder, PreservesOrderAcrossBatches) {
  testing::FakeEmbedServer server;
  HttpEmbedderOptions opt;
  opt.batch_size = 3;
  opt.max_in_flight = 2;
  HttpEmbedder client(server.url(), opt);
  std::vector<std::string> texts;
  for (int i = 0; i < 10; ++i) texts.push_back("satz nummer " + std::to_string(i));
  auto out = embed(texts, client);
  ASSERT_EQ(out.size(), texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_NEAR(sem_dist(out[i], test_hash_embed(texts[i])), 0.0, 1e-12);
  EXPECT_EQ(server.embed_calls.load(), 4);
  EXPECT_EQ(client.name(), "remote:fake-hash");
  EXPECT_EQ(client.dim(), 256u);
}

TEST(HttpEmbedder, BoundsConcurrentRequests) {
  testing::FakeEmbedServer server;
  server.delay = std::chrono::milliseconds(50);
  HttpEmbedderOptions opt;
  opt.batch_size = 1;
  opt.max_in_flight = 3;
  HttpEmbedder client(server.url(), opt);
  std::vector<std::string> texts(9, "abcdef");
  client.embed(texts);
  EXPECT_LE(server.max_in_flight.load(), 3);
  EXPECT_GE(server.max_in_flight.load(), 2);
}

TEST(HttpEmbedder, RetriesTransientFailures) {
  testing::FakeEmbedServer server;
  server.fail_with = [](int call) { return call == 0 ? 503 : 0; };
  HttpEmbedderOptions opt;
  opt.retry_backoff = std::chrono::milliseconds(1);
  HttpEmbedder client(server.url(), opt);
  std::vector<std::string> texts = {"eins zwei"};
  EXPECT_EQ(client.embed(texts).size(), 1u);
  EXPECT_EQ(server.embed_calls.load(), 2);
}

TEST(HttpEmbedder, ClassifiesErrors) {
  testing::FakeEmbedServer server;
  server.fail_with = [](int) { return 400; };
  HttpEmbedderOptions opt;
  opt.retry_backoff = std::chrono::milliseconds(1);
  HttpEmbedder client(server.url(), opt);
  std::vector<std::string> texts = {"eins zwei"};
  try {
    client.embed(texts);
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_FALSE(e.retryable());
    EXPECT_NE(std::string(e.what()).find("injected failure"), std::string::npos);
  }
  EXPECT_EQ(server.embed_calls.load(), 1);

  server.fail_with = [](int) { return 500; };
  try {
    client.embed(texts);
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_TRUE(e.retryable());
  }
  EXPECT_EQ(server.embed_calls.load(), 1 + 1 + opt.max_retries);

  HttpEmbedder unreachable("http://127.0.0.1:1", opt);
  try {
    unreachable.embed(texts);
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_TRUE(e.retryable());
  }
}

TEST(HttpEmbedder, CacheIsTransparentAndAvoidsRemoteCalls) {
  testing::FakeEmbedServer server;
  auto path = temp_path("remote.smxe");
  std::vector<std::string> texts = {"a b c", "d e f", "a b c"};
  auto direct = HttpEmbedder(server.url()).embed(texts);
  const int calls_after_direct = server.embed_calls.load();
  {
    CachedEmbedder cached(EmbeddingCache::open(path), std::make_shared<HttpEmbedder>(server.url()));
    EXPECT_EQ(cached.name(), "remote:fake-hash");
    auto via_cache = cached.embed(texts);
    for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(via_cache[i], direct[i]);
    EXPECT_EQ(cached.cache().size(), 2u);
  }
  const int calls_after_fill = server.embed_calls.load();
  EXPECT_GT(calls_after_fill, calls_after_direct);
  CachedEmbedder again(EmbeddingCache::open(path), std::make_shared<HttpEmbedder>(server.url()));
  auto reread = again.embed(texts);
  EXPECT_EQ(server.embed_calls.load(), calls_after_fill);
  for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(reread[i], direct[i]);
}

}  // namespace
}  // namespace semantix
