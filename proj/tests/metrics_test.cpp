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

#include "brute_lcs.hpp"
#include "memprobe/metrics.hpp"

namespace memprobe {
namespace {

TEST(Normalize, CaseSeparatorsAndEdgePunctuation) {
  EXPECT_EQ(normalize("Yes."), (std::vector<std::string>{"yes"}));
  EXPECT_EQ(normalize("  A,b;C  d "), (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_EQ(normalize("\"quoted\" (paren) **bold**"),
            (std::vector<std::string>{"quoted", "paren", "bold"}));
  EXPECT_EQ(normalize("-5 well-known"), (std::vector<std::string>{"-5", "well-known"}));
  EXPECT_TRUE(normalize(" ... , ;").empty());
}

TEST(Normalize, Idempotent) {
  for (const char* s : {"Hello, World!", "a;b;c", "  X  y. Z?", "'L1', 'L2'"}) {
    const auto once = normalize(s);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    EXPECT_EQ(normalize(joined), once) << s;
  }
}

TEST(Lcs, MatchesBruteForceOnRandomPairs) {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const auto a = testing::random_tokens(rng, 12, 4);
    const auto b = testing::random_tokens(rng, 12, 4);
    ASSERT_EQ(lcs_length(a, b), testing::brute_lcs(a, b)) << i;
  }
}

TEST(Lcs, EdgeCases) {
  const std::vector<std::string> empty, abc = {"a", "b", "c"};
  EXPECT_EQ(lcs_length(empty, abc), 0u);
  EXPECT_EQ(lcs_length(abc, abc), 3u);
  EXPECT_EQ(lcs_length(abc, std::vector<std::string>{"c", "b", "a"}), 1u);
}

TEST(RougeL, HandCase) {
  EXPECT_NEAR(rouge_l("a c", "a b c d", RougeMode::Recall).value, 1.0, 1e-9);
  EXPECT_NEAR(rouge_l("a c", "a b c d", RougeMode::F1).value, 2.0 / 3.0, 1e-9);
}

TEST(RougeL, EmptySidesAndBounds) {
  EXPECT_EQ(rouge_l("", "a", RougeMode::F1).value, 0.0);
  EXPECT_EQ(rouge_l("a", "", RougeMode::F1).value, 0.0);
  EXPECT_EQ(rouge_l("a b", "A, B.", RougeMode::F1).value, 1.0);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto a = testing::random_tokens(rng, 20, 6);
    const auto b = testing::random_tokens(rng, 20, 6);
    std::string ra, rb;
    for (const auto& t : a) ra += t + " ";
    for (const auto& t : b) rb += t + " ";
    const double f = rouge_l(ra, rb, RougeMode::F1).value;
    const double r = rouge_l(ra, rb, RougeMode::Recall).value;
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(RougeL, LongInputsAreCappedWithNote) {
  std::string big;
  for (std::size_t i = 0; i < kLcsTokenCap + 10; ++i) big += "w ";
  const auto s = rouge_l(big, big, RougeMode::F1);
  EXPECT_EQ(s.value, 1.0);
  ASSERT_TRUE(s.note);
}

TEST(ExactMatch, BinaryUsesFirstYesNoToken) {
  EXPECT_EQ(exact_match(Binary{true}, "Yes.").value, 1.0);
  EXPECT_EQ(exact_match(Binary{false}, "No, it is not.").value, 1.0);
  EXPECT_EQ(exact_match(Binary{true}, "The answer: no. Yes").value, 0.0);
  EXPECT_EQ(exact_match(Binary{true}, "").value, 0.0);
  EXPECT_EQ(exact_match(Binary{true}, "maybe").value, 0.0);
}

TEST(ExactMatch, TextIntegerAndTailRule) {
  EXPECT_EQ(exact_match(Integer{15}, "15").value, 1.0);
  EXPECT_EQ(exact_match(Integer{15}, "The final result is 15").value, 1.0);
  EXPECT_EQ(exact_match(Integer{15}, "15 is the answer").value, 0.0);
  EXPECT_EQ(exact_match(Integer{-3}, "-3").value, 1.0);
  EXPECT_EQ(exact_match(Text{"S4"}, "s4").value, 1.0);
  EXPECT_EQ(exact_match(Text{"S4"}, "one two three four five six seven eight nine ten S4").value, 0.0);
}

TEST(Jaccard, HandCases) {
  EXPECT_EQ(jaccard(make_word_set({"a", "b"}), "b, c").value, 1.0 / 3.0);
  EXPECT_EQ(jaccard(WordSet{}, "").value, 1.0);
  EXPECT_EQ(jaccard(make_word_set({"a"}), "").value, 0.0);
  EXPECT_EQ(jaccard(make_word_set({"pear", "lime"}), "The basket has pear and lime.").value, 1.0);
}

TEST(Jaccard, AgentSectionsAveraged) {
  const AgentSets want{{{"Alice", {"apple", "berry"}}, {"Bob", {"banana"}}}};
  EXPECT_EQ(jaccard(want, "Alice: apple, berry\nBob: banana").value, 1.0);
  EXPECT_EQ(jaccard(want, "**Bob**: banana\n**alice**: apple, berry").value, 1.0);
  EXPECT_EQ(jaccard(want, "Alice: apple, berry").value, 0.5);
  EXPECT_EQ(jaccard(want, "Alice: apple\nBob: banana").value, 0.75);
  EXPECT_EQ(jaccard(AgentSets{{{"Alice", {}}}}, "Alice: none").value, 1.0);
}

TEST(ScoreCase, DispatchesOnMetric) {
  TestCase c;
  c.reference = Text{"a b c"};
  c.metric = MetricKind::RougeL;
  EXPECT_EQ(score_case(c, "a b c").value, 1.0);
  c.metric = MetricKind::RougeLRecall;
  EXPECT_EQ(score_case(c, "x a y b z c").value, 1.0);
  c.metric = MetricKind::ExactMatch;
  EXPECT_EQ(score_case(c, "a b").value, 0.0);
}

TEST(Score, JsonRoundTrip) {
  const Score s{0.25, MetricKind::Jaccard, std::string("note")};
  const auto back = score_from_json(score_to_json(s));
  EXPECT_EQ(back.value, s.value);
  EXPECT_EQ(back.metric, s.metric);
  EXPECT_EQ(back.note, s.note);
}

}  // namespace
}  // namespace memprobe
