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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aihq/instrument.hpp"
#include "aihq/prompts.hpp"

namespace aihq {

struct SplitSpec {
  double fraction = 0.5;
  std::uint64_t seed = 20240501;
  /// When false every participant is in one stratum.
  bool stratify_by_group = true;
};

struct Split {
  Dataset train;
  Dataset test;
};

/// Within each stratum floor(fraction * n) participants go to train. The
/// choice depends only on (seed, stratum, sorted participant ids), never on
/// input order. Unlabeled participants form their own stratum.
/// Throws InvalidArgument for fraction outside (0,1], EmptyStratum for an
/// empty dataset.
Split stratified_split(const Dataset& dataset, const SplitSpec& spec);

struct FinetuneExample {
  std::string participant_id;
  int scenario_id = 0;
  Construct construct = Construct::AttributionOfHostility;
  std::string system_text;
  std::string user_text;
  std::string target_text;
};

/// Round-half-up mean of integer ratings: (3,4) -> 4, (2,3,3) -> 3.
int rounded_mean_rating(const std::vector<int>& ratings);

/// One example per (participant, scenario, construct) with a response,
/// ordered by (participant_id, scenario_id, construct). user_text is exactly
/// build_prompt(...).user_text. Throws MissingHumanRating.
std::vector<FinetuneExample> build_finetune_examples(const Dataset& train, const Catalog& catalog,
                                                     const DecodingParams& decoding = {});

/// {"messages":[{"role":"system",...},{"role":"user",...},{"role":"assistant","content":"3"}]}
std::string export_chat_jsonl(const Dataset& train, const Catalog& catalog);
/// {"input":...,"target":"3"}
std::string export_text2text_jsonl(const Dataset& train, const Catalog& catalog);

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0;
  double validation_loss = 0;
  double rouge1 = 0;
  double rouge2 = 0;
  double rougeL = 0;
  double rougeLsum = 0;
};

/// CSV `epoch,train_loss,validation_loss,rouge1,rouge2,rougeL,rougeLsum`.
/// Throws InvalidCsv / MissingColumn.
std::vector<EpochMetrics> parse_epoch_metrics_csv(std::string_view text);
std::vector<EpochMetrics> load_epoch_metrics_csv(const std::filesystem::path& path);

struct CheckpointChoice {
  int epoch = 0;
  /// "unanimous", or the criteria the chosen epoch is best on, e.g.
  /// "validation_loss, rougeLsum".
  std::string rationale;
};

/// Lowest validation loss; ties go to the higher rougeLsum, then the lower
/// epoch. Throws EmptyMetrics.
CheckpointChoice select_checkpoint(const std::vector<EpochMetrics>& metrics);

}  // namespace aihq
