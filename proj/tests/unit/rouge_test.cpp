// Copyright 2026 The aihq-rater Authors.
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

#include <random>

#include "aihq/rouge.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace aihq::stats {
namespace {

std::string join(const std::vector<std::string>& t) {
  std::string s;
  for (const auto& w : t) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

TEST(Rouge, Tokenizer) {
  EXPECT_EQ(rouge_tokenize("The CAT, sat-on the mat!"),
            (std::vector<std::string>{"the", "cat", "sat", "on", "the", "mat"}));
  EXPECT_TRUE(rouge_tokenize("  ,;  ").empty());
  EXPECT_EQ(rouge_tokenize("caf\xc3\xa9 au lait"), (std::vector<std::string>{"caf", "au", "lait"}));
}

TEST(Rouge, HandCountedUnigrams) {
  const auto s = rouge("the cat sat", "the cat ran", RougeVariant::R1);
  EXPECT_NEAR(s.recall, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.f1, 2.0 / 3.0, 1e-12);
}

TEST(Rouge, HandComputedLcs) {
  const auto s = rouge("a b c d", "a c d", RougeVariant::RL);
  EXPECT_NEAR(s.recall, 1.0, 1e-12);
  EXPECT_NEAR(s.precision, 0.75, 1e-12);
  EXPECT_NEAR(s.f1, 6.0 / 7.0, 1e-12);
}

TEST(Rouge, IdenticalStringsScoreOne) {
  for (auto v : {RougeVariant::R1, RougeVariant::R2, RougeVariant::RL, RougeVariant::RLsum}) {
    EXPECT_NEAR(rouge("one two three four", "one two three four", v).f1, 1.0, 1e-12);
  }
}

TEST(Rouge, EmptySidesScoreZero) {
  for (auto v : {RougeVariant::R1, RougeVariant::R2, RougeVariant::RL, RougeVariant::RLsum}) {
    EXPECT_EQ(rouge("", "", v).f1, 0.0);
    EXPECT_EQ(rouge("a b", "", v).f1, 0.0);
    EXPECT_EQ(rouge("", "a b", v).f1, 0.0);
  }
}

TEST(Rouge, UnigramRecallCanFallBelowBigramRecall) {
  // Clipping caps the repeated "a" at one unigram hit while both reference
  // bigrams appear in the candidate.
  const auto r1 = rouge("b a b", "a b a", RougeVariant::R1);
  const auto r2 = rouge("b a b", "a b a", RougeVariant::R2);
  EXPECT_NEAR(r1.recall, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r2.recall, 1.0, 1e-12);
}

TEST(Rouge, LsumOnSingleSentenceEqualsL) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(1, 9);
  std::uniform_int_distribution<int> word(0, 3);
  const std::vector<std::string> vocab{"a", "b", "c", "d"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> c(len(rng));
    std::vector<std::string> r(len(rng));
    for (auto& w : c) w = vocab[word(rng)];
    for (auto& w : r) w = vocab[word(rng)];
    const auto l = rouge(join(c), join(r), RougeVariant::RL);
    const auto ls = rouge(join(c), join(r), RougeVariant::RLsum);
    EXPECT_NEAR(l.f1, ls.f1, 1e-12);
  }
}

TEST(Rouge, LsumUnionAcrossSentences) {
  // Reference sentence "w1 w2 w3 w4 w5"; candidate sentences cover w1 w2 and
  // w3 w5 separately, so the union hits 4 of 5 reference tokens.
  const auto s = rouge("w1 w2 w6\nw3 w5", "w1 w2 w3 w4 w5", RougeVariant::RLsum);
  EXPECT_NEAR(s.recall, 4.0 / 5.0, 1e-12);
  EXPECT_NEAR(s.precision, 4.0 / 5.0, 1e-12);
  // Plain RL sees one token stream and finds the same 4-token LCS.
  EXPECT_NEAR(rouge("w1 w2 w6\nw3 w5", "w1 w2 w3 w4 w5", RougeVariant::RL).recall, 4.0 / 5.0, 1e-12);
  // Sentence order matters for RL but not for the union.
  EXPECT_NEAR(rouge("w3 w5\nw1 w2 w6", "w1 w2 w3 w4 w5", RougeVariant::RLsum).recall, 4.0 / 5.0, 1e-12);
  EXPECT_NEAR(rouge("w3 w5\nw1 w2 w6", "w1 w2 w3 w4 w5", RougeVariant::RL).recall, 2.0 / 5.0, 1e-12);
}

TEST(Rouge, MatchesBruteForceOracles) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> len(0, 10);
  std::uniform_int_distribution<int> word(0, 4);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> c(len(rng));
    std::vector<std::string> r(len(rng));
    for (auto& w : c) w = vocab[word(rng)];
    for (auto& w : r) w = vocab[word(rng)];
    ASSERT_EQ(lcs_length(r, c), oracle::lcs_enumerate(r, c));

    const auto o1 = oracle::prf(oracle::ngram_overlap(c, r, 1), c.size(), r.size());
    const auto c2 = c.size() >= 2 ? c.size() - 1 : 0;
    const auto r2 = r.size() >= 2 ? r.size() - 1 : 0;
    const auto o2 = oracle::prf(oracle::ngram_overlap(c, r, 2), c2, r2);
    const auto ol = oracle::prf(oracle::lcs_enumerate(r, c), c.size(), r.size());
    const auto s1 = rouge(join(c), join(r), RougeVariant::R1);
    const auto s2 = rouge(join(c), join(r), RougeVariant::R2);
    const auto sl = rouge(join(c), join(r), RougeVariant::RL);
    for (auto [got, want] : {std::pair{s1, o1}, std::pair{s2, o2}, std::pair{sl, ol}}) {
      ASSERT_NEAR(got.precision, want.p, 1e-9);
      ASSERT_NEAR(got.recall, want.r, 1e-9);
      ASSERT_NEAR(got.f1, want.f, 1e-9);
      EXPECT_GE(got.f1, 0.0);
      EXPECT_LE(got.f1, 1.0);
    }
    EXPECT_EQ(sl.f1 == 1.0, !c.empty() && c == r);
  }
}

}  // namespace
}  // namespace aihq::stats
