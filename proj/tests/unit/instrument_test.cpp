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

#include "aihq/csv.hpp"
#include "aihq/instrument.hpp"
#include "test_support.hpp"

namespace aihq {
namespace {

using testing::fixture;
using testing::standard_catalog;

const std::string kHeader =
    "participant_id,group,scenario_id,scenario_type,hostility_response,aggression_response\n";

TEST(Instrument, EnumSpellings) {
  for (auto t : kScenarioTypes) EXPECT_EQ(parse_scenario_type(to_string(t)), t);
  for (auto c : kConstructs) EXPECT_EQ(parse_construct(to_string(c)), c);
  for (auto g : {Group::TBI, Group::HC, Group::Unlabeled}) EXPECT_EQ(parse_group(to_string(g)), g);
  EXPECT_EQ(to_string(Group::Unlabeled), "NA");
  EXPECT_FALSE(parse_group("control").has_value());
}

TEST(Instrument, CatalogFixtureIsComplete) {
  const auto cat = load_catalog_csv(fixture("catalog.csv"));
  const auto rep = validate_catalog(cat);
  EXPECT_TRUE(rep.complete) << rep.summary();
  EXPECT_EQ(rep.type_counts, (std::array<int, 3>{5, 5, 5}));
  EXPECT_FALSE(rep.type_imbalance);
}

TEST(Instrument, CatalogValidationFindsProblems) {
  const auto cat = parse_catalog_csv(
      "scenario_id,scenario_type,text\n1,ambiguous,a\n1,ambiguous,b\n2,accidental,\n16,intentional,x\n");
  const auto rep = validate_catalog(cat);
  EXPECT_FALSE(rep.complete);
  EXPECT_EQ(rep.duplicate_ids, std::vector<int>{1});
  EXPECT_EQ(rep.empty_text_ids, std::vector<int>{2});
  EXPECT_EQ(rep.out_of_range_ids, std::vector<int>{16});
  EXPECT_EQ(rep.missing_ids.size(), 13u);
  EXPECT_AIHQ_ERROR(parse_catalog_csv("scenario_id,scenario_type,text\nx,ambiguous,a\n"), InvalidCsv);
  EXPECT_AIHQ_ERROR(standard_catalog().at(99), UnknownScenarioId);
}

TEST(Instrument, FixtureParsesSorted) {
  const auto d = load_dataset_csv(fixture("two_participants.csv"));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].participant_id, "P01");
  EXPECT_EQ(d[0].group, Group::TBI);
  EXPECT_EQ(d[1].group, Group::HC);
  EXPECT_EQ(d[0].responses.size(), 10u);
  EXPECT_EQ(d[0].self_reports.size(), 5u);
  const auto* item = d[0].find(1, Construct::AttributionOfHostility);
  ASSERT_NE(item, nullptr);
  EXPECT_EQ(item->human_ratings, (std::vector<int>{5, 4}));
  EXPECT_DOUBLE_EQ(*item->mean_human_rating(), 4.5);
}

TEST(Instrument, RowOrderDoesNotMatter) {
  const auto text = testing::slurp(fixture("two_participants.csv"));
  auto table = csv::parse(text);
  std::string shuffled;
  csv::append_row(shuffled, table.header);
  std::mt19937_64 rng(9);
  std::shuffle(table.rows.begin(), table.rows.end(), rng);
  for (const auto& r : table.rows) csv::append_row(shuffled, r);
  EXPECT_EQ(parse_dataset_csv(shuffled), parse_dataset_csv(text));
}

TEST(Instrument, DatasetErrors) {
  EXPECT_AIHQ_ERROR(parse_dataset_csv("participant_id,group,scenario_id\nP,TBI,1\n"), MissingColumn);
  EXPECT_AIHQ_ERROR(parse_dataset_csv(kHeader + "P,TBI,1,ambiguous,a,b\nP,TBI,1,ambiguous,c,d\n"), DuplicateItem);
  EXPECT_AIHQ_ERROR(parse_dataset_csv(kHeader + "P,TBI,16,ambiguous,a,b\n"), UnknownScenarioId);
  EXPECT_AIHQ_ERROR(parse_dataset_csv(kHeader + "P,Control,1,ambiguous,a,b\n"), UnknownGroupLabel);
  EXPECT_AIHQ_ERROR(parse_dataset_csv(kHeader + "P,TBI,1,ambiguous,a,b\nQ,HC,1,accidental,a,b\n"),
                    ScenarioTypeMismatch);
  EXPECT_AIHQ_ERROR(parse_dataset_csv(kHeader + ",TBI,1,ambiguous,a,b\n"), InvalidCsv);
  EXPECT_AIHQ_ERROR(parse_dataset_csv(kHeader + "P,TBI,1,ambiguous,a,b\n", {.require_human_ratings = true}),
                    MissingColumn);
  const std::string rated = "participant_id,group,scenario_id,scenario_type,hostility_response,"
                            "aggression_response,rater1_hostility\n";
  EXPECT_AIHQ_ERROR(parse_dataset_csv(rated + "P,TBI,1,ambiguous,a,b,6\n"), RatingOutOfRange);
  EXPECT_AIHQ_ERROR(parse_dataset_csv(rated + "P,TBI,1,ambiguous,a,b,x\n"), InvalidCsv);
}

TEST(Instrument, BlankResponsesAreMissingItems) {
  const auto d = parse_dataset_csv(kHeader + "P,NA,3,ambiguous,,they meant it\n");
  ASSERT_EQ(d[0].responses.size(), 1u);
  EXPECT_EQ(d[0].responses[0].construct, Construct::AggressionResponse);
  EXPECT_EQ(d[0].group, Group::Unlabeled);
}

TEST(Instrument, WriteParseRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto d = testing::synthetic_dataset({.participants = 6, .self_reports = seed % 2 == 0, .seed = seed});
    d[0].responses[0].text = "has, a comma and \"quotes\"\nand a newline";
    d[1].responses.erase(d[1].responses.begin() + 3);
    d[2].responses[4].human_ratings.resize(1);
    EXPECT_EQ(parse_dataset_csv(write_dataset_csv(d)), d) << "seed " << seed;
  }
}

TEST(Instrument, CatalogFromDataset) {
  const auto d = load_dataset_csv(fixture("two_participants.csv"));
  const auto cat = catalog_from_dataset(d);
  EXPECT_EQ(cat.scenarios().size(), 5u);
  EXPECT_EQ(cat.at(11).scenario_type, ScenarioType::Accidental);
}

TEST(Aggregation, OverallIsMeanOfTypeMeans) {
  const auto cat = standard_catalog();
  // ambiguous {1,2,3} -> 2, intentional {5} -> 5, accidental none.
  const auto s = aggregate_scales(std::map<int, int>{{1, 1}, {2, 2}, {3, 3}, {6, 5}}, cat);
  EXPECT_DOUBLE_EQ(*s.per_type_mean[0], 2.0);
  EXPECT_DOUBLE_EQ(*s.per_type_mean[1], 5.0);
  EXPECT_FALSE(s.per_type_mean[2].has_value());
  EXPECT_DOUBLE_EQ(*s.overall_mean, 3.5);
  EXPECT_EQ(s.n_items_used, (std::array<int, 3>{3, 1, 0}));
  EXPECT_FALSE(aggregate_scales(std::map<int, int>{}, cat).overall_mean.has_value());
  EXPECT_AIHQ_ERROR(aggregate_scales(std::map<int, int>{{20, 1}}, cat), UnknownScenarioId);
}

TEST(Aggregation, MatchesOracleOnRandomSubsets) {
  const auto cat = standard_catalog();
  std::mt19937_64 rng(17);
  std::bernoulli_distribution keep(0.6);
  std::uniform_int_distribution<int> rating(1, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::map<int, int> r;
    for (int id = 1; id <= 15; ++id) {
      if (keep(rng)) r[id] = rating(rng);
    }
    const auto s = aggregate_scales(r, cat);
    std::array<std::vector<int>, 3> by_type;
    for (auto [id, v] : r) by_type[(id - 1) / 5].push_back(v);
    std::vector<double> means;
    for (std::size_t t = 0; t < 3; ++t) {
      if (by_type[t].empty()) {
        EXPECT_FALSE(s.per_type_mean[t].has_value());
        continue;
      }
      double sum = 0;
      for (int v : by_type[t]) sum += v;
      means.push_back(sum / by_type[t].size());
      ASSERT_NEAR(*s.per_type_mean[t], means.back(), 1e-12);
      EXPECT_GE(*s.per_type_mean[t], 1.0);
      EXPECT_LE(*s.per_type_mean[t], 5.0);
    }
    if (means.empty()) {
      EXPECT_FALSE(s.overall_mean.has_value());
    } else {
      double sum = 0;
      for (double m : means) sum += m;
      ASSERT_NEAR(*s.overall_mean, sum / means.size(), 1e-12);
    }
  }
}

}  // namespace
}  // namespace aihq
