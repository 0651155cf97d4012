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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aihq {

enum class ScenarioType { Ambiguous, Intentional, Accidental };
inline constexpr std::array<ScenarioType, 3> kScenarioTypes{
    ScenarioType::Ambiguous, ScenarioType::Intentional, ScenarioType::Accidental};

enum class Construct { AttributionOfHostility, AggressionResponse };
inline constexpr std::array<Construct, 2> kConstructs{Construct::AttributionOfHostility,
                                                      Construct::AggressionResponse};

enum class Group { TBI, HC, Unlabeled };

inline constexpr int kScenarioCount = 15;
inline constexpr int kScenariosPerType = 5;
inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 5;
inline constexpr int kMaxIntentionality = 6;

constexpr std::size_t index_of(ScenarioType t) noexcept { return static_cast<std::size_t>(t); }
constexpr std::size_t index_of(Construct c) noexcept { return static_cast<std::size_t>(c); }

/// CSV spellings: ambiguous/intentional/accidental, hostility/aggression, TBI/HC/NA.
std::string_view to_string(ScenarioType t) noexcept;
std::string_view to_string(Construct c) noexcept;
std::string_view to_string(Group g) noexcept;
std::optional<ScenarioType> parse_scenario_type(std::string_view s) noexcept;
std::optional<Construct> parse_construct(std::string_view s) noexcept;
std::optional<Group> parse_group(std::string_view s) noexcept;

struct ScenarioSpec {
  int scenario_id = 0;
  ScenarioType scenario_type = ScenarioType::Ambiguous;
  std::string text;
};

/// Scenario texts keyed by id. The AIHQ vignettes are distributed separately
/// from this tool, so catalogs are always user-supplied files.
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<ScenarioSpec> scenarios) : scenarios_(std::move(scenarios)) {}

  [[nodiscard]] const std::vector<ScenarioSpec>& scenarios() const noexcept { return scenarios_; }
  [[nodiscard]] const ScenarioSpec* find(int scenario_id) const noexcept;
  /// Throws UnknownScenarioId.
  [[nodiscard]] const ScenarioSpec& at(int scenario_id) const;

 private:
  std::vector<ScenarioSpec> scenarios_;
};

/// Reads `scenario_id,scenario_type,text`. Structural problems (bad header,
/// non-numeric id, unknown type) throw; completeness problems are left for
/// validate_catalog to report.
Catalog load_catalog_csv(const std::filesystem::path& path);
Catalog parse_catalog_csv(std::string_view text);

struct CatalogReport {
  bool complete = false;
  std::vector<int> missing_ids;
  std::vector<int> duplicate_ids;
  std::vector<int> out_of_range_ids;
  std::vector<int> empty_text_ids;
  std::array<int, 3> type_counts{};
  bool type_imbalance = false;

  [[nodiscard]] std::string summary() const;
};

CatalogReport validate_catalog(const Catalog& catalog);

struct ItemResponse {
  int scenario_id = 0;
  Construct construct = Construct::AttributionOfHostility;
  std::string text;
  std::vector<int> human_ratings;

  [[nodiscard]] std::optional<double> mean_human_rating() const;
};

struct SelfReport {
  int anger = 0;
  int blame = 0;
  int intentionality = 0;
};

struct ParticipantRecord {
  std::string participant_id;
  Group group = Group::Unlabeled;
  std::vector<ItemResponse> responses;
  /// Keyed by scenario_id.
  std::map<int, SelfReport> self_reports;
  /// Keyed by scenario_id; the type as declared in the dataset file.
  std::map<int, ScenarioType> scenario_types;

  [[nodiscard]] const ItemResponse* find(int scenario_id, Construct construct) const noexcept;
};

using Dataset = std::vector<ParticipantRecord>;

/// Which optional column groups must be present in a dataset file.
struct DatasetSchema {
  bool require_human_ratings = false;
  bool require_self_reports = false;
};

/// Records come back sorted by participant_id with responses sorted by
/// (scenario_id, construct), so row order in the file does not matter.
/// Errors: MissingColumn, DuplicateItem, RatingOutOfRange, UnknownScenarioId,
/// UnknownGroupLabel, ScenarioTypeMismatch, InvalidCsv.
Dataset load_dataset_csv(const std::filesystem::path& path, const DatasetSchema& schema = {});
Dataset parse_dataset_csv(std::string_view text, const DatasetSchema& schema = {});

/// Scenario types as declared in a dataset, with empty texts. Enough for
/// aggregation when no catalog file is at hand. Throws ScenarioTypeMismatch.
Catalog catalog_from_dataset(const Dataset& dataset);

/// Extra trailing columns for write_dataset_csv, filled per (participant, scenario) row.
struct ExtraColumns {
  std::vector<std::string> names;
  std::function<std::vector<std::string>(const ParticipantRecord&, int scenario_id)> values;
};

/// Canonical serialization; parse_dataset_csv(write_dataset_csv(d)) == d.
std::string write_dataset_csv(const Dataset& dataset, const ExtraColumns* extra = nullptr);

struct ScaleScores {
  std::array<std::optional<double>, 3> per_type_mean{};
  std::optional<double> overall_mean;
  std::array<int, 3> n_items_used{};

  [[nodiscard]] std::optional<double> slice(std::optional<ScenarioType> type) const noexcept {
    return type ? per_type_mean[index_of(*type)] : overall_mean;
  }
};

/// Mean within each scenario type over present items, then the overall score
/// as the mean of the available type means (not the mean of all items).
/// Throws UnknownScenarioId for ids absent from the catalog.
ScaleScores aggregate_scales(const std::map<int, double>& ratings, const Catalog& catalog);
ScaleScores aggregate_scales(const std::map<int, int>& ratings, const Catalog& catalog);

bool operator==(const ItemResponse& a, const ItemResponse& b);
bool operator==(const SelfReport& a, const SelfReport& b);
bool operator==(const ParticipantRecord& a, const ParticipantRecord& b);

}  // namespace aihq
