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

#include "aihq/prompts.hpp"

#include "aihq/digest.hpp"
#include "aihq/error.hpp"
#include "aihq/strings.hpp"

namespace aihq {

PromptBundle build_prompt(Construct construct, const ScenarioSpec& scenario,
                          std::string_view response_text, const DecodingParams& decoding) {
  const auto response = trim(response_text);
  if (response.empty()) {
    throw Error(ErrorCode::EmptyResponse, "empty " + std::string(to_string(construct)) +
                                              " response for scenario " +
                                              std::to_string(scenario.scenario_id));
  }
  const auto scenario_text = trim(scenario.text);
  if (scenario_text.empty()) {
    throw Error(ErrorCode::EmptyScenarioText,
                "scenario " + std::to_string(scenario.scenario_id) + " has no text in the catalog");
  }

  PromptBundle bundle;
  bundle.system_text = kSystemPrompt;
  bundle.user_text.reserve(rubric(construct).size() + scenario_text.size() + response.size() + 24);
  bundle.user_text += rubric(construct);
  bundle.user_text += "\n\nScenario: ";
  bundle.user_text += scenario_text;
  bundle.user_text += "\n\nResponse: ";
  bundle.user_text += response;
  bundle.construct = construct;
  bundle.scenario_id = scenario.scenario_id;
  bundle.decoding = decoding;
  return bundle;
}

std::string prompt_digest(const PromptBundle& bundle) {
  std::string material;
  material.reserve(bundle.system_text.size() + bundle.user_text.size() + 32);
  material += std::to_string(bundle.system_text.size());
  material += ':';
  material += bundle.system_text;
  material += std::to_string(bundle.user_text.size());
  material += ':';
  material += bundle.user_text;
  return sha256_hex(material);
}

}  // namespace aihq
