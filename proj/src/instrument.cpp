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

#include "aihq/instrument.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "aihq/csv.hpp"
#include "aihq/error.hpp"
#include "aihq/strings.hpp"

namespace aihq {

std::string_view to_string(ScenarioType t) noexcept {
  switch (t) {
    case ScenarioType::Ambiguous: return "ambiguous";
    case ScenarioType::Intentional: return "intentional";
    case ScenarioType::Accidental: return "accidental";
  }
  return "?";
}

std::string_view to_string(Construct c) noexcept {
  return c == Construct::AttributionOfHostility ? "hostility" : "aggression";
}

std::string_view to_string(Group g) noexcept {
  switch (g) {
    case Group::TBI: return "TBI";
    case Group::HC: return "HC";
    case Group::Unlabeled: return "NA";
  }
  return "?";
}

std::optional<ScenarioType> parse_scenario_type(std::string_view s) noexcept {
  const auto v = trim(s);
  for (auto t : kScenarioTypes) {
    if (v == to_string(t)) return t;
  }
  return std::nullopt;
}

std::optional<Construct> parse_construct(std::string_view s) noexcept {
  const auto v = trim(s);
  for (auto c : kConstructs) {
    if (v == to_string(c)) return c;
  }
  return std::nullopt;
}

std::optional<Group> parse_group(std::string_view s) noexcept {
  const auto v = trim(s);
  if (v == "TBI") return Group::TBI;
  if (v == "HC") return Group::HC;
  if (v == "NA" || v.empty()) return Group::Unlabeled;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Catalog

const ScenarioSpec* Catalog::find(int scenario_id) const noexcept {
  for (const auto& s : scenarios_) {
    if (s.scenario_id == scenario_id) return &s;
  }
  return nullptr;
}

const ScenarioSpec& Catalog::at(int scenario_id) const {
  if (const auto* s = find(scenario_id)) return *s;
  throw Error(ErrorCode::UnknownScenarioId,
              "scenario_id " + std::to_string(scenario_id) + " is not in the catalog");
}

namespace {

std::size_t require_column(const csv::Table& table, std::string_view name) {
  if (auto idx = table.column(name)) return *idx;
  throw Error(ErrorCode::MissingColumn, "missing required column '" + std::string(name) + "'");
}

std::string where(const csv::Table& table, std::size_t row, std::string_view column) {
  return "row " + std::to_string(table.row_numbers[row]) + ", column '" + std::string(column) + "'";
}

}  // namespace

Catalog parse_catalog_csv(std::string_view text) {
  const auto table = csv::parse(text);
  const auto id_col = require_column(table, "scenario_id");
  const auto type_col = require_column(table, "scenario_type");
  const auto text_col = require_column(table, "text");

  std::vector<ScenarioSpec> scenarios;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto id = parse_int(trim(row[id_col]));
    if (!id) {
      throw Error(ErrorCode::InvalidCsv,
                  where(table, r, "scenario_id") + ": not an integer: '" + row[id_col] + "'");
    }
    auto type = parse_scenario_type(row[type_col]);
    if (!type) {
      throw Error(ErrorCode::InvalidCsv,
                  where(table, r, "scenario_type") + ": unknown type '" + row[type_col] + "'");
    }
    scenarios.push_back({*id, *type, row[text_col]});
  }
  return Catalog(std::move(scenarios));
}

Catalog load_catalog_csv(const std::filesystem::path& path) {
  return parse_catalog_csv(csv::read_text_file(path));
}

CatalogReport validate_catalog(const Catalog& catalog) {
  CatalogReport report;
  std::set<int> seen;
  std::set<int> duplicates;
  for (const auto& s : catalog.scenarios()) {
    if (s.scenario_id < 1 || s.scenario_id > kScenarioCount) {
      report.out_of_range_ids.push_back(s.scenario_id);
      continue;
    }
    if (!seen.insert(s.scenario_id).second) {
      duplicates.insert(s.scenario_id);
      continue;
    }
    ++report.type_counts[index_of(s.scenario_type)];
    if (trim(s.text).empty()) report.empty_text_ids.push_back(s.scenario_id);
  }
  for (int id = 1; id <= kScenarioCount; ++id) {
    if (!seen.contains(id)) report.missing_ids.push_back(id);
  }
  report.duplicate_ids.assign(duplicates.begin(), duplicates.end());
  std::sort(report.empty_text_ids.begin(), report.empty_text_ids.end());
  report.type_imbalance = std::any_of(report.type_counts.begin(), report.type_counts.end(),
                                      [](int n) { return n != kScenariosPerType; });
  report.complete = report.missing_ids.empty() && report.duplicate_ids.empty() &&
                    report.out_of_range_ids.empty() && report.empty_text_ids.empty() &&
                    !report.type_imbalance;
  return report;
}

std::string CatalogReport::summary() const {
  if (complete) return "complete";
  auto join = [](const std::vector<int>& ids) {
    std::string out;
    for (auto id : ids) {
      if (!out.empty()) out += ' ';
      out += std::to_string(id);
    }
    return out;
  };
  std::ostringstream out;
  out << "incomplete";
  if (!missing_ids.empty()) out << "; missing ids: " << join(missing_ids);
  if (!duplicate_ids.empty()) out << "; duplicate ids: " << join(duplicate_ids);
  if (!out_of_range_ids.empty()) out << "; out-of-range ids: " << join(out_of_range_ids);
  if (!empty_text_ids.empty()) out << "; empty text: " << join(empty_text_ids);
  if (type_imbalance) {
    out << "; type imbalance: ambiguous=" << type_counts[0] << " intentional=" << type_counts[1]
        << " accidental=" << type_counts[2];
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Dataset

std::optional<double> ItemResponse::mean_human_rating() const {
  if (human_ratings.empty()) return std::nullopt;
  const double sum = std::accumulate(human_ratings.begin(), human_ratings.end(), 0.0);
  return sum / static_cast<double>(human_ratings.size());
}

const ItemResponse* ParticipantRecord::find(int scenario_id, Construct construct) const noexcept {
  for (const auto& r : responses) {
    if (r.scenario_id == scenario_id && r.construct == construct) return &r;
  }
  return nullptr;
}

namespace {

constexpr std::array<std::string_view, 2> kResponseColumns{"hostility_response",
                                                           "aggression_response"};
constexpr std::array<std::array<std::string_view, 2>, 2> kRaterColumns{{
    {"rater1_hostility", "rater2_hostility"},
    {"rater1_aggression", "rater2_aggression"},
}};
constexpr std::array<std::string_view, 3> kSelfReportColumns{"anger", "blame", "intentionality"};

std::optional<int> read_rating(const csv::Table& table, std::size_t row, std::size_t col,
                               int max_value) {
  const auto raw = trim(table.rows[row][col]);
  if (raw.empty()) return std::nullopt;
  const auto& name = table.header[col];
  auto value = parse_int(raw);
  if (!value) {
    throw Error(ErrorCode::InvalidCsv,
                where(table, row, name) + ": rating must be an integer, got '" + std::string(raw) + "'");
  }
  if (*value < kMinRating || *value > max_value) {
    throw Error(ErrorCode::RatingOutOfRange, where(table, row, name) + ": rating " +
                                                 std::to_string(*value) + " outside 1-" +
                                                 std::to_string(max_value));
  }
  return value;
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text, const DatasetSchema& schema) {
  const auto table = csv::parse(text);
  const auto pid_col = require_column(table, "participant_id");
  const auto group_col = require_column(table, "group");
  const auto sid_col = require_column(table, "scenario_id");
  const auto type_col = require_column(table, "scenario_type");
  std::array<std::size_t, 2> response_cols{};
  for (auto c : kConstructs) response_cols[index_of(c)] = require_column(table, kResponseColumns[index_of(c)]);

  std::array<std::array<std::optional<std::size_t>, 2>, 2> rater_cols{};
  for (auto c : kConstructs) {
    for (std::size_t k = 0; k < 2; ++k) {
      const auto name = kRaterColumns[index_of(c)][k];
      rater_cols[index_of(c)][k] =
          schema.require_human_ratings ? require_column(table, name) : table.column(name);
    }
  }
  std::array<std::optional<std::size_t>, 3> self_cols{};
  for (std::size_t k = 0; k < 3; ++k) {
    self_cols[k] = schema.require_self_reports ? require_column(table, kSelfReportColumns[k])
                                               : table.column(kSelfReportColumns[k]);
  }

  std::map<std::string, ParticipantRecord> by_id;
  std::map<int, ScenarioType> declared_types;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string pid(trim(row[pid_col]));
    if (pid.empty()) throw Error(ErrorCode::InvalidCsv, where(table, r, "participant_id") + ": empty");

    auto group = parse_group(row[group_col]);
    if (!group) {
      throw Error(ErrorCode::UnknownGroupLabel,
                  where(table, r, "group") + ": unknown group '" + row[group_col] + "' (expected TBI, HC or NA)");
    }
    auto sid = parse_int(trim(row[sid_col]));
    if (!sid || *sid < 1 || *sid > kScenarioCount) {
      throw Error(ErrorCode::UnknownScenarioId,
                  where(table, r, "scenario_id") + ": '" + row[sid_col] + "' is not a scenario id 1-15");
    }
    auto type = parse_scenario_type(row[type_col]);
    if (!type) {
      throw Error(ErrorCode::InvalidCsv,
                  where(table, r, "scenario_type") + ": unknown type '" + row[type_col] + "'");
    }
    if (auto [it, inserted] = declared_types.emplace(*sid, *type); !inserted && it->second != *type) {
      throw Error(ErrorCode::ScenarioTypeMismatch,
                  where(table, r, "scenario_type") + ": scenario " + std::to_string(*sid) +
                      " declared as both " + std::string(to_string(it->second)) + " and " +
                      std::string(to_string(*type)));
    }

    auto [it, inserted] = by_id.try_emplace(pid);
    auto& record = it->second;
    if (inserted) {
      record.participant_id = pid;
      record.group = *group;
    } else if (record.group != *group) {
      throw Error(ErrorCode::UnknownGroupLabel,
                  where(table, r, "group") + ": participant '" + pid + "' has conflicting group labels");
    }
    if (!record.scenario_types.emplace(*sid, *type).second) {
      throw Error(ErrorCode::DuplicateItem, "row " + std::to_string(table.row_numbers[r]) +
                                                ": participant '" + pid + "' scenario " +
                                                std::to_string(*sid) + " appears more than once");
    }

    for (auto c : kConstructs) {
      ItemResponse item;
      item.scenario_id = *sid;
      item.construct = c;
      item.text = row[response_cols[index_of(c)]];
      for (const auto& col : rater_cols[index_of(c)]) {
        if (!col) continue;
        if (auto rating = read_rating(table, r, *col, kMaxRating)) item.human_ratings.push_back(*rating);
      }
      if (!trim(item.text).empty() || !item.human_ratings.empty()) {
        record.responses.push_back(std::move(item));
      }
    }

    std::array<std::optional<int>, 3> self{};
    int present = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      if (!self_cols[k]) continue;
      self[k] = read_rating(table, r, *self_cols[k], k == 2 ? kMaxIntentionality : kMaxRating);
      present += self[k].has_value();
    }
    if (present == 3) {
      record.self_reports.emplace(*sid, SelfReport{*self[0], *self[1], *self[2]});
    } else if (present != 0) {
      throw Error(ErrorCode::InvalidCsv, "row " + std::to_string(table.row_numbers[r]) +
                                             ": anger, blame and intentionality must be given together");
    }
  }

  Dataset dataset;
  dataset.reserve(by_id.size());
  for (auto& [pid, record] : by_id) {
    std::sort(record.responses.begin(), record.responses.end(), [](const auto& a, const auto& b) {
      return std::tie(a.scenario_id, a.construct) < std::tie(b.scenario_id, b.construct);
    });
    dataset.push_back(std::move(record));
  }
  return dataset;
}

Dataset load_dataset_csv(const std::filesystem::path& path, const DatasetSchema& schema) {
  return parse_dataset_csv(csv::read_text_file(path), schema);
}

Catalog catalog_from_dataset(const Dataset& dataset) {
  std::map<int, ScenarioType> types;
  for (const auto& p : dataset) {
    for (const auto& [sid, type] : p.scenario_types) {
      if (auto [it, inserted] = types.emplace(sid, type); !inserted && it->second != type) {
        throw Error(ErrorCode::ScenarioTypeMismatch,
                    "scenario " + std::to_string(sid) + " has inconsistent types across participants");
      }
    }
  }
  std::vector<ScenarioSpec> specs;
  for (const auto& [sid, type] : types) specs.push_back({sid, type, {}});
  return Catalog(std::move(specs));
}

std::string write_dataset_csv(const Dataset& dataset, const ExtraColumns* extra) {
  bool any_ratings = false;
  bool any_self = false;
  for (const auto& p : dataset) {
    any_self = any_self || !p.self_reports.empty();
    for (const auto& r : p.responses) any_ratings = any_ratings || !r.human_ratings.empty();
  }

  std::vector<std::string> header{"participant_id", "group", "scenario_id", "scenario_type",
                                  "hostility_response", "aggression_response"};
  if (any_ratings) {
    header.insert(header.end(), {"rater1_hostility", "rater2_hostility", "rater1_aggression",
                                 "rater2_aggression"});
  }
  if (any_self) header.insert(header.end(), {"anger", "blame", "intentionality"});
  if (extra) header.insert(header.end(), extra->names.begin(), extra->names.end());

  std::string out;
  csv::append_row(out, header);

  std::vector<const ParticipantRecord*> ordered;
  for (const auto& p : dataset) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->participant_id < b->participant_id; });

  for (const auto* p : ordered) {
    for (const auto& [sid, type] : p->scenario_types) {
      std::vector<std::string> row{p->participant_id, std::string(to_string(p->group)),
                                   std::to_string(sid), std::string(to_string(type))};
      const auto* hostility = p->find(sid, Construct::AttributionOfHostility);
      const auto* aggression = p->find(sid, Construct::AggressionResponse);
      row.push_back(hostility ? hostility->text : "");
      row.push_back(aggression ? aggression->text : "");
      if (any_ratings) {
        for (const auto* item : {hostility, aggression}) {
          for (std::size_t k = 0; k < 2; ++k) {
            row.push_back(item && k < item->human_ratings.size()
                              ? std::to_string(item->human_ratings[k])
                              : "");
          }
        }
      }
      if (any_self) {
        auto it = p->self_reports.find(sid);
        if (it != p->self_reports.end()) {
          row.insert(row.end(), {std::to_string(it->second.anger), std::to_string(it->second.blame),
                                 std::to_string(it->second.intentionality)});
        } else {
          row.insert(row.end(), {"", "", ""});
        }
      }
      if (extra) {
        auto values = extra->values(*p, sid);
        values.resize(extra->names.size());
        row.insert(row.end(), values.begin(), values.end());
      }
      csv::append_row(out, row);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

ScaleScores aggregate_scales(const std::map<int, double>& ratings, const Catalog& catalog) {
  std::array<double, 3> sums{};
  ScaleScores scores;
  for (const auto& [sid, rating] : ratings) {
    const auto type = index_of(catalog.at(sid).scenario_type);
    sums[type] += rating;
    ++scores.n_items_used[type];
  }
  double type_sum = 0.0;
  int types_present = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    if (scores.n_items_used[t] == 0) continue;
    const double mean = sums[t] / scores.n_items_used[t];
    scores.per_type_mean[t] = mean;
    type_sum += mean;
    ++types_present;
  }
  if (types_present > 0) scores.overall_mean = type_sum / types_present;
  return scores;
}

ScaleScores aggregate_scales(const std::map<int, int>& ratings, const Catalog& catalog) {
  std::map<int, double> as_real;
  for (const auto& [sid, r] : ratings) as_real.emplace(sid, static_cast<double>(r));
  return aggregate_scales(as_real, catalog);
}

bool operator==(const ItemResponse& a, const ItemResponse& b) {
  return a.scenario_id == b.scenario_id && a.construct == b.construct && a.text == b.text &&
         a.human_ratings == b.human_ratings;
}

bool operator==(const SelfReport& a, const SelfReport& b) {
  return a.anger == b.anger && a.blame == b.blame && a.intentionality == b.intentionality;
}

bool operator==(const ParticipantRecord& a, const ParticipantRecord& b) {
  return a.participant_id == b.participant_id && a.group == b.group &&
         a.responses == b.responses && a.self_reports == b.self_reports &&
         a.scenario_types == b.scenario_types;
}

}  // namespace aihq
