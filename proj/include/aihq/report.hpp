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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aihq/instrument.hpp"
#include "aihq/stats.hpp"

namespace aihq {

/// Table rows: all scenarios, then one row per scenario type.
enum class Slice { All, Ambiguous, Intentional, Accidental };
inline constexpr std::array<Slice, 4> kSlices{Slice::All, Slice::Ambiguous, Slice::Intentional,
                                              Slice::Accidental};
std::string_view to_string(Slice s) noexcept;
std::optional<ScenarioType> scenario_type_of(Slice s) noexcept;
constexpr std::size_t index_of(Slice s) noexcept { return static_cast<std::size_t>(s); }

struct ParticipantScaleEntry {
  Group group = Group::Unlabeled;
  std::array<ScaleScores, 2> by_construct;
};

/// Participant-level scale scores keyed by participant_id.
using ScaleTable = std::map<std::string, ParticipantScaleEntry>;

/// Each item scored by the unrounded mean of its human ratings.
ScaleTable human_scale_table(const Dataset& dataset, const Catalog& catalog);
/// Items scored by rater 1 (`rater` = 0) or rater 2 (`rater` = 1); only items
/// carrying both ratings are used so the two tables cover the same items.
ScaleTable rater_scale_table(const Dataset& dataset, const Catalog& catalog, std::size_t rater);

struct AgreementCell {
  std::optional<stats::CorrelationResult> result;
  /// Participants present on both sides with a value for this cell.
  std::size_t n = 0;
  /// Why `result` is empty (too few pairs, zero variance).
  std::string reason;
};

/// [slice][construct]
using AgreementGrid = std::array<std::array<AgreementCell, 2>, 4>;

struct IccSummary {
  std::size_t n_items = 0;
  std::optional<double> icc2_1;
  std::optional<double> icc3_1;
  std::string reason;
};

struct AgreementReport {
  AgreementGrid overall;
  /// Only strata (TBI, HC) present on both sides appear.
  std::map<Group, AgreementGrid> by_stratum;
  std::size_t participants_a = 0;
  std::size_t participants_b = 0;
  std::size_t participants_shared = 0;
};

/// Correlates participant-level means cell by cell, with pairwise deletion.
/// Throws EmptyCell when the two tables share no participant.
AgreementReport build_agreement_report(const ScaleTable& a, const ScaleTable& b, bool by_stratum = true);

/// Item-level ICC per construct on items rated by both raters.
std::array<IccSummary, 2> item_level_icc(const Dataset& dataset);

struct GroupDifferenceCell {
  std::size_t n_tbi = 0;
  std::size_t n_hc = 0;
  std::optional<stats::TTestResult> test;
  std::string stars;
  std::string reason;
};

struct GroupDifferenceTable {
  stats::TTestMethod method = stats::TTestMethod::Welch;
  stats::Tail tail = stats::Tail::OneTailedGreater;
  /// [slice][construct]; the test is TBI versus HC.
  std::array<std::array<GroupDifferenceCell, 2>, 4> cells;
};

GroupDifferenceTable build_group_difference_table(
    const ScaleTable& scales, stats::TTestMethod method = stats::TTestMethod::Welch,
    stats::Tail tail = stats::Tail::OneTailedGreater);

enum class Subscale { AttributionOfIntent, AngerResponse, AttributionOfBlame };
inline constexpr std::array<Subscale, 3> kSubscales{Subscale::AttributionOfIntent,
                                                    Subscale::AngerResponse,
                                                    Subscale::AttributionOfBlame};
std::string_view to_string(Subscale s) noexcept;

struct SubscaleMatrix {
  std::optional<Group> group_filter;
  /// [subscale][slice][construct]
  std::array<std::array<std::array<AgreementCell, 2>, 4>, 3> cells;

  [[nodiscard]] std::string stars(Subscale s, Slice sl, Construct c) const;
};

/// Self-report subscales use the same mean-of-type-means rule as the scales.
/// Throws MissingSelfReports when no participant (in the filter) has any.
SubscaleMatrix build_subscale_matrix(const Dataset& dataset, const Catalog& catalog,
                                     const ScaleTable& scores,
                                     std::optional<Group> group_filter = std::nullopt);

/// A dataset CSV with `model_hostility` and `model_aggression` columns
/// (as written by write_merged_csv). Blank model cells are missing ratings.
struct EvaluationInput {
  Dataset dataset;
  /// participant_id -> scenario_id -> rating, per construct.
  std::array<std::map<std::string, std::map<int, int>>, 2> model_ratings;
};

/// Errors as parse_dataset_csv, plus MissingColumn for absent model columns.
EvaluationInput parse_evaluation_csv(std::string_view text);
EvaluationInput load_evaluation_csv(const std::filesystem::path& path);

ScaleTable model_scale_table(const EvaluationInput& input, const Catalog& catalog);

struct EvaluationOptions {
  stats::TTestMethod method = stats::TTestMethod::Welch;
  stats::Tail tail = stats::Tail::OneTailedGreater;
};

struct EvaluationReport {
  std::size_t participants = 0;
  AgreementReport model_vs_human;
  std::optional<AgreementReport> rater1_vs_rater2;
  std::optional<std::array<IccSummary, 2>> icc;
  std::optional<GroupDifferenceTable> human_groups;
  std::optional<GroupDifferenceTable> model_groups;
  std::optional<SubscaleMatrix> subscales_human;
  std::optional<SubscaleMatrix> subscales_model;
};

/// Every section whose inputs are present is filled; absent optional data
/// (rater columns, both groups, self-reports) leaves the section empty.
EvaluationReport evaluate(const EvaluationInput& input, const Catalog& catalog,
                          const EvaluationOptions& options = {});

std::string report_to_json(const EvaluationReport& report);
/// Long format, one statistic per line: section,stratum,row,construct,metric,value.
std::string report_to_csv(const EvaluationReport& report);
/// Fixed-layout tables with All/Ambiguous/Intentional/Accidental rows.
std::string report_to_text(const EvaluationReport& report);

}  // namespace aihq
