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

#pragma once

#include <string>
#include <string_view>

#include "aihq/instrument.hpp"

namespace aihq {

/// Greedy decoding with a short completion budget keeps chat models on a
/// single number.
struct DecodingParams {
  double temperature = 0.0;
  int max_tokens = 10;

  friend bool operator==(const DecodingParams&, const DecodingParams&) = default;
};

inline constexpr std::string_view kSystemPrompt = "You are a helpful assistant.";

inline constexpr std::string_view kHostilityRubric =
    "Read the following written responses people give regarding why they thought the person in "
    "the scene before acted toward them the way they did. Your task is to rate the hostility of "
    "the attributed intent. A rating of 1 would be given if someone perceived the situation as an "
    "accident. A rating of 5 would be given if someone thought the person in the scene did this "
    "on purpose and wanted to harm them. A rating of 3 might be given if the person thought the "
    "person in the scene did this on purpose to some degree, but did not intend to harm them. "
    "Please output a single numeric number from 1 to 5, do not include anything other than the "
    "number in the output.";

inline constexpr std::string_view kAggressionRubric =
    "Read the following behavioral responses people give toward the social situation above. Your "
    "task is to rate the presence of aggression in the behavioral response. A rating of 1 is given "
    "for a passive response or one in which the participant says that she/he would do nothing. A "
    "rating of 5 would be given for physical retaliation. Other examples of ratings include: 2 (the "
    "participant reports that he /she would ask why the other person acted toward them in that "
    "way), 3 (the participant would tell the other person not to act that way again), and 4 (the "
    "participant would yell at the other person). Please output a single numeric number from 1 to "
    "5, do not include anything other than the number in the output.";

constexpr std::string_view rubric(Construct c) noexcept {
  return c == Construct::AttributionOfHostility ? kHostilityRubric : kAggressionRubric;
}

struct PromptBundle {
  std::string system_text;
  std::string user_text;
  Construct construct = Construct::AttributionOfHostility;
  int scenario_id = 0;
  DecodingParams decoding;
};

/// user_text layout:
///
///     <rubric>\n\nScenario: <scenario text>\n\nResponse: <response>
///
/// Scenario text and response are trimmed of surrounding whitespace.
/// Throws EmptyResponse / EmptyScenarioText.
PromptBundle build_prompt(Construct construct, const ScenarioSpec& scenario,
                          std::string_view response_text, const DecodingParams& decoding = {});

/// Digest of the message content only (system and user text, length-prefixed).
/// Decoding parameters are deliberately outside it; the cache key adds them.
std::string prompt_digest(const PromptBundle& bundle);

}  // namespace aihq
