// Copyright 2026 The memprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "memprobe/corpus.hpp"
#include "support.hpp"

namespace memprobe {
namespace {

using testing::dictionary;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, BoundedHelpersStayInRange) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(rng.below(13), 13u);
    const auto v = rng.between(-5, 5);
    EXPECT_GE(v, -5);
    EXPECT_LE(v, 5);
    const double u = rng.unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, ChooseIsSortedAndDistinct) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto idx = rng.choose(50, 20);
    ASSERT_EQ(idx.size(), 20u);
    EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
    EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 20u);
    EXPECT_LT(idx.back(), 50u);
  }
}

TEST(Rng, ShuffleIsPermutation) {
  Rng rng(11);
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i;
  auto w = v;
  rng.shuffle(w);
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(Seed, PathChangesValue) {
  const Seed a{0, {"count", "repetition=2", "0"}};
  const Seed b{0, {"count", "repetition=2", "1"}};
  const Seed c{1, {"count", "repetition=2", "0"}};
  EXPECT_NE(a.value(), b.value());
  EXPECT_NE(a.value(), c.value());
  EXPECT_EQ(a.value(), (Seed{0, {"count", "repetition=2", "0"}}.value()));
  EXPECT_EQ(a.child("x").path.back(), "x");
}

TEST(Vocabulary, DictionaryIsLargeCleanAndUnreserved) {
  const auto& v = dictionary();
  EXPECT_GE(v.size(), Vocabulary::kMinDictionarySize);
  const std::regex plain("[a-z]+");
  for (const auto& w : v.words()) {
    ASSERT_TRUE(std::regex_match(w, plain)) << w;
    ASSERT_FALSE(reserved_words().count(w)) << w;
  }
}

TEST(Vocabulary, RejectsDuplicatesAndSeparators) {
  EXPECT_THROW(Vocabulary({"ab", "ab"}, VocabMode::Gibberish), InsufficientVocabulary);
  EXPECT_THROW(Vocabulary({"a,b"}, VocabMode::Gibberish), InsufficientVocabulary);
  EXPECT_THROW(Vocabulary({"a b"}, VocabMode::Gibberish), InsufficientVocabulary);
  EXPECT_THROW(Vocabulary({"abc"}, VocabMode::Dictionary), InsufficientVocabulary);
}

TEST(Vocabulary, MissingFileIsIoError) {
  EXPECT_THROW(load_vocabulary("/nonexistent/words.txt"), IoError);
}

TEST(SampleWords, ZeroIsEmpty) {
  Rng rng(1);
  EXPECT_TRUE(sample_words(dictionary(), 0, rng).empty());
}

TEST(SampleWords, DistinctDeterministicAndExcluding) {
  Rng a(5), b(5);
  const std::unordered_set<std::string> exclude(dictionary().words().begin(),
                                                dictionary().words().begin() + 100);
  const auto x = sample_words(dictionary(), 500, a, exclude);
  const auto y = sample_words(dictionary(), 500, b, exclude);
  EXPECT_EQ(x, y);
  EXPECT_EQ(std::set<std::string>(x.begin(), x.end()).size(), 500u);
  for (const auto& w : x) EXPECT_FALSE(exclude.count(w));
}

TEST(SampleWords, FullDrawIsPermutation) {
  Vocabulary small({"aa", "bb", "cc", "dd", "ee"}, VocabMode::Gibberish);
  Rng rng(9);
  auto all = sample_words(small, 5, rng);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, small.words());
  EXPECT_THROW(sample_words(small, 6, rng), InsufficientVocabulary);
}

TEST(Gibberish, LettersOnlyAbsentFromDictionaryAndMostlyDistinct) {
  Rng rng(17);
  const auto g = make_gibberish_vocabulary(dictionary(), 1000, rng);
  const std::regex re("[a-z]{4,10}");
  for (const auto& w : g.words()) {
    EXPECT_TRUE(std::regex_match(w, re)) << w;
    EXPECT_FALSE(dictionary().contains(w)) << w;
  }
  Rng raw(17);
  std::set<std::string> draws;
  for (int i = 0; i < 1000; ++i) draws.insert(gibberish_word(raw, 4, 10));
  EXPECT_GE(draws.size(), 990u);
}

TEST(Estimator, WordsAndCharsRatios) {
  TokenBudget words;
  EXPECT_EQ(estimate_tokens("a b c d e f g h", words), 11u);  // ceil(8 * 4 / 3)
  EXPECT_EQ(estimate_tokens("", words), 0u);
  TokenBudget chars;
  chars.estimator = TokenEstimator::chars_per_token(4);
  EXPECT_EQ(estimate_tokens(std::string(400, 'x'), chars), 100u);
  EXPECT_EQ(estimate_tokens(std::string(401, 'x'), chars), 101u);
}

TEST(FitUnits, PicksClosestAndRejectsTinyBudget) {
  TokenBudget b;
  b.target_tokens = 1000;
  const auto n = fit_units(b, 1, [](std::size_t k) { return std::uint64_t{k} * 7; });
  EXPECT_EQ(n, 143u);  // 1001 beats 994
  b.target_tokens = 10;
  EXPECT_THROW(fit_units(b, 5, [](std::size_t k) { return std::uint64_t{k} * 7; }), BudgetTooSmall);
}

TEST(FillToBudget, LandsInBandAndKeepsCoreOrder) {
  Rng pick(23);
  for (int trial = 0; trial < 40; ++trial) {
    TokenBudget b;
    b.target_tokens = 200 + pick.below(8000);
    Rng rng(static_cast<std::uint64_t>(trial));
    const auto core = sample_words(dictionary(), 5, rng);
    const auto out = fill_to_budget(core, dictionary(), b, rng);
    EXPECT_TRUE(b.in_band(estimate_tokens(text::join(out, " "), b))) << b.target_tokens;
    std::vector<std::string> seen;
    for (const auto& w : out)
      if (std::find(core.begin(), core.end(), w) != core.end()) seen.push_back(w);
    EXPECT_EQ(seen, core);
  }
}

TEST(FillToBudget, OversizedCoreThrows) {
  TokenBudget b;
  b.target_tokens = 5;
  Rng rng(1);
  const auto core = sample_words(dictionary(), 50, rng);
  EXPECT_THROW(fill_to_budget(core, dictionary(), b, rng), BudgetTooSmall);
}

}  // namespace
}  // namespace memprobe
