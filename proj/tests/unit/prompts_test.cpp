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

#include "aihq/digest.hpp"
#include "aihq/prompts.hpp"
#include "test_support.hpp"

namespace aihq {
namespace {

TEST(Digest, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Prompts, PinnedTextDigests) {
  EXPECT_EQ(kHostilityRubric.size(), 656u);
  EXPECT_EQ(kAggressionRubric.size(), 711u);
  EXPECT_EQ(sha256_hex(kHostilityRubric), "cff6f1674a537d3852a794bb8e53d85c9199cf722926b2d70c3575cad6791157");
  EXPECT_EQ(sha256_hex(kAggressionRubric), "2f27f265279f2fcb786e11d401cb41835559e3a62fc42333cb948f2a3866efbe");
  EXPECT_EQ(sha256_hex(kSystemPrompt), "75357d685f238b6afd7738be9786fdafde641eb6ca9a3be7471939715a68a4de");
}

TEST(Prompts, Layout) {
  const ScenarioSpec s{4, ScenarioType::Ambiguous, "  A friend walks past you.\n"};
  const auto b = build_prompt(Construct::AggressionResponse, s, "\tI would ask why. ");
  EXPECT_EQ(b.system_text, kSystemPrompt);
  EXPECT_EQ(b.user_text, std::string(kAggressionRubric) +
                             "\n\nScenario: A friend walks past you.\n\nResponse: I would ask why.");
  EXPECT_EQ(b.scenario_id, 4);
  EXPECT_EQ(b.construct, Construct::AggressionResponse);
  EXPECT_EQ(b.decoding.temperature, 0.0);
  EXPECT_EQ(b.decoding.max_tokens, 10);
}

TEST(Prompts, Errors) {
  const ScenarioSpec s{1, ScenarioType::Ambiguous, "text"};
  const ScenarioSpec blank{2, ScenarioType::Ambiguous, "   "};
  EXPECT_AIHQ_ERROR(build_prompt(Construct::AttributionOfHostility, s, " \n "), EmptyResponse);
  EXPECT_AIHQ_ERROR(build_prompt(Construct::AttributionOfHostility, blank, "ok"), EmptyScenarioText);
}

TEST(Prompts, DigestDependsOnContentOnly) {
  const ScenarioSpec s{1, ScenarioType::Ambiguous, "text"};
  const auto a = build_prompt(Construct::AttributionOfHostility, s, "resp");
  const auto hot = build_prompt(Construct::AttributionOfHostility, s, " resp ", {0.7, 50});
  EXPECT_EQ(prompt_digest(a), prompt_digest(hot));
  EXPECT_EQ(prompt_digest(a).size(), 64u);
  EXPECT_NE(prompt_digest(a), prompt_digest(build_prompt(Construct::AggressionResponse, s, "resp")));
  EXPECT_NE(prompt_digest(a), prompt_digest(build_prompt(Construct::AttributionOfHostility, s, "resp2")));
  // Length prefixes keep the system/user boundary unambiguous.
  auto shifted = a;
  shifted.system_text += "X";
  auto moved = a;
  moved.user_text.insert(0, "X");
  EXPECT_NE(prompt_digest(shifted), prompt_digest(moved));
}

}  // namespace
}  // namespace aihq
