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

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "aihq/backend.hpp"
#include "aihq/cache.hpp"
#include "aihq/error.hpp"
#include "aihq/instrument.hpp"
#include "aihq/prompts.hpp"
#include "aihq/rating_parser.hpp"

namespace aihq {

struct ScoreResult {
  std::optional<int> rating;
  std::string raw_output;
  ScoreFlags flags;
  bool cache_hit = false;
  std::string backend_id;
  std::string prompt_digest;
};

struct ScoringOptions {
  DecodingParams decoding;
  /// Extra attempts after an unparseable reply (3 attempts in total by default).
  int retry_budget = 2;
  std::size_t parallelism = 1;
};

/// Cache first, then the backend. Unparseable replies are retried up to the
/// retry budget and flagged Retried; the final outcome, rated or not, is cached.
/// Errors: EmptyResponse, EmptyScenarioText, plus backend errors
/// (AuthFailure, BackendUnavailable, RateLimited, Timeout, MalformedResponse).
ScoreResult score_item(const ItemResponse& item, const ScenarioSpec& scenario, Backend& backend,
                       ScoreCache& cache, const ScoringOptions& options = {});

struct ItemOutcome {
  std::string participant_id;
  Group group = Group::Unlabeled;
  int scenario_id = 0;
  ScenarioType scenario_type = ScenarioType::Ambiguous;
  Construct construct = Construct::AttributionOfHostility;
  std::optional<ScoreResult> result;
  std::optional<ErrorCode> error_code;
  std::string error;
};

struct ParticipantScales {
  std::string participant_id;
  Group group = Group::Unlabeled;
  std::array<ScaleScores, 2> by_construct;
};

struct ScoringFailure {
  std::string participant_id;
  int scenario_id = 0;
  Construct construct = Construct::AttributionOfHostility;
  std::string reason;
};

struct ScoringManifest {
  std::size_t items_total = 0;
  std::size_t items_rated = 0;
  std::size_t cache_hits = 0;
  std::size_t backend_calls = 0;
  std::map<std::string, std::size_t> flag_counts;
  std::vector<ScoringFailure> failures;
  bool cancelled = false;
};

struct ScoredDataset {
  /// Sorted by (participant_id, scenario_id, construct).
  std::vector<ItemOutcome> items;
  /// Sorted by participant_id.
  std::vector<ParticipantScales> scales;
  ScoringManifest manifest;
};

using ProgressFn = std::function<void(std::size_t completed, std::size_t total)>;

/// Scores every response with a bounded pool of `options.parallelism`
/// workers. Item-level failures never abort the run: the item is left
/// unrated and listed in the manifest. Output is independent of parallelism
/// and participant order. Stopping via `stop` leaves unstarted items unscored
/// and sets manifest.cancelled.
/// Throws UnknownScenarioId / ScenarioTypeMismatch when the catalog does not
/// cover the dataset.
ScoredDataset score_dataset(const Dataset& dataset, const Catalog& catalog, Backend& backend,
                            ScoreCache& cache, const ScoringOptions& options = {},
                            const ProgressFn& progress = {}, std::stop_token stop = {});

/// Item rows, a blank line, then the per-participant scale section.
std::string write_results_csv(const ScoredDataset& scored);
std::string write_results_json(const ScoredDataset& scored);
std::string write_manifest_json(const ScoringManifest& manifest);
/// The input dataset plus model_hostility / model_aggression columns, ready
/// for the evaluation step.
std::string write_merged_csv(const Dataset& dataset, const ScoredDataset& scored);

/// Shortest round-trip decimal text for a double.
std::string format_number(double value);

}  // namespace aihq
