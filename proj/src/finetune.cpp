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

#include "aihq/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <json.hpp>
#include <map>
#include <random>
#include <tuple>

#include "aihq/csv.hpp"
#include "aihq/error.hpp"
#include "aihq/strings.hpp"

namespace aihq {

using ordered_json = nlohmann::ordered_json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// uniform_int_distribution is implementation-defined; this is not.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % n;
  }
}

}  // namespace

Split stratified_split(const Dataset& dataset, const SplitSpec& spec) {
  if (!(spec.fraction > 0.0 && spec.fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("split fraction {} outside (0,1]", spec.fraction));
  }
  if (dataset.empty()) throw Error(ErrorCode::EmptyStratum, "cannot split an empty dataset");

  std::map<std::string, std::vector<const ParticipantRecord*>> strata;
  for (const auto& p : dataset) {
    const std::string key = spec.stratify_by_group ? std::string(to_string(p.group)) : "all";
    strata[key].push_back(&p);
  }

  std::vector<const ParticipantRecord*> train;
  std::vector<const ParticipantRecord*> test;
  for (auto& [label, members] : strata) {
    std::sort(members.begin(), members.end(),
              [](auto* a, auto* b) { return a->participant_id < b->participant_id; });
    std::mt19937_64 rng(splitmix64(spec.seed ^ fnv1a(label)));
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[bounded(rng, i)]);
    }
    const auto n_train = static_cast<std::size_t>(
        std::floor(spec.fraction * static_cast<double>(members.size()) + 1e-9));
    train.insert(train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }

  auto materialize = [](std::vector<const ParticipantRecord*>& v) {
    std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->participant_id < b->participant_id; });
    Dataset d;
    d.reserve(v.size());
    for (const auto* p : v) d.push_back(*p);
    return d;
  };
  return {materialize(train), materialize(test)};
}

int rounded_mean_rating(const std::vector<int>& ratings) {
  if (ratings.empty()) throw Error(ErrorCode::MissingHumanRating, "no human ratings");
  long long sum = 0;
  for (int r : ratings) sum += r;
  const auto k = static_cast<long long>(ratings.size());
  // floor(sum/k + 1/2) for non-negative sums
  return static_cast<int>((2 * sum + k) / (2 * k));
}

std::vector<FinetuneExample> build_finetune_examples(const Dataset& train, const Catalog& catalog,
                                                     const DecodingParams& decoding) {
  std::vector<FinetuneExample> out;
  for (const auto& p : train) {
    for (const auto& r : p.responses) {
      if (r.human_ratings.empty()) {
        throw Error(ErrorCode::MissingHumanRating,
                    fmt::format("participant {} scenario {} {} has no human rating", p.participant_id,
                                r.scenario_id, to_string(r.construct)));
      }
      const PromptBundle bundle = build_prompt(r.construct, catalog.at(r.scenario_id), r.text, decoding);
      out.push_back({p.participant_id, r.scenario_id, r.construct, bundle.system_text,
                     bundle.user_text, std::to_string(rounded_mean_rating(r.human_ratings))});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.participant_id, a.scenario_id, a.construct) <
           std::tie(b.participant_id, b.scenario_id, b.construct);
  });
  return out;
}

namespace {

std::string dump_line(const ordered_json& j) {
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

}  // namespace

std::string export_chat_jsonl(const Dataset& train, const Catalog& catalog) {
  std::string out;
  for (const auto& ex : build_finetune_examples(train, catalog)) {
    ordered_json j;
    j["messages"] = ordered_json::array(
        {ordered_json{{"role", "system"}, {"content", ex.system_text}},
         ordered_json{{"role", "user"}, {"content", ex.user_text}},
         ordered_json{{"role", "assistant"}, {"content", ex.target_text}}});
    out += dump_line(j);
  }
  return out;
}

std::string export_text2text_jsonl(const Dataset& train, const Catalog& catalog) {
  std::string out;
  for (const auto& ex : build_finetune_examples(train, catalog)) {
    ordered_json j;
    j["input"] = ex.user_text;
    j["target"] = ex.target_text;
    out += dump_line(j);
  }
  return out;
}

std::vector<EpochMetrics> parse_epoch_metrics_csv(std::string_view text) {
  const csv::Table t = csv::parse(text);
  static constexpr std::array<std::string_view, 7> kCols{
      "epoch", "train_loss", "validation_loss", "rouge1", "rouge2", "rougeL", "rougeLsum"};
  std::array<std::size_t, 7> idx{};
  for (std::size_t c = 0; c < kCols.size(); ++c) {
    auto col = t.column(kCols[c]);
    if (!col) throw Error(ErrorCode::MissingColumn, fmt::format("missing column {}", kCols[c]));
    idx[c] = *col;
  }
  std::vector<EpochMetrics> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    auto num = [&](std::size_t c) {
      auto v = parse_double(row[idx[c]]);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::InvalidCsv, fmt::format("row {}: {} is not a number", t.row_numbers[r], kCols[c]));
      }
      return *v;
    };
    EpochMetrics m;
    auto epoch = parse_int(trim(row[idx[0]]));
    if (!epoch || *epoch < 1) {
      throw Error(ErrorCode::InvalidCsv, fmt::format("row {}: epoch must be a positive integer", t.row_numbers[r]));
    }
    m.epoch = *epoch;
    m.train_loss = num(1);
    m.validation_loss = num(2);
    m.rouge1 = num(3);
    m.rouge2 = num(4);
    m.rougeL = num(5);
    m.rougeLsum = num(6);
    for (double v : {m.rouge1, m.rouge2, m.rougeL, m.rougeLsum}) {
      if (v < 0.0 || v > 1.0) {
        throw Error(ErrorCode::InvalidCsv, fmt::format("row {}: ROUGE value {} outside [0,1]", t.row_numbers[r], v));
      }
    }
    out.push_back(m);
  }
  return out;
}

std::vector<EpochMetrics> load_epoch_metrics_csv(const std::filesystem::path& path) {
  return parse_epoch_metrics_csv(csv::read_text_file(path));
}

CheckpointChoice select_checkpoint(const std::vector<EpochMetrics>& metrics) {
  if (metrics.empty()) throw Error(ErrorCode::EmptyMetrics, "no epoch metrics");
  const EpochMetrics& best = *std::min_element(metrics.begin(), metrics.end(), [](const auto& a, const auto& b) {
    if (a.validation_loss != b.validation_loss) return a.validation_loss < b.validation_loss;
    if (a.rougeLsum != b.rougeLsum) return a.rougeLsum > b.rougeLsum;
    return a.epoch < b.epoch;
  });

  struct Criterion {
    std::string_view name;
    double EpochMetrics::*field;
    bool lower_is_better;
  };
  static constexpr std::array<Criterion, 6> kCriteria{{
      {"validation_loss", &EpochMetrics::validation_loss, true},
      {"train_loss", &EpochMetrics::train_loss, true},
      {"rouge1", &EpochMetrics::rouge1, false},
      {"rouge2", &EpochMetrics::rouge2, false},
      {"rougeL", &EpochMetrics::rougeL, false},
      {"rougeLsum", &EpochMetrics::rougeLsum, false},
  }};

  std::vector<std::string_view> agreed;
  for (const auto& c : kCriteria) {
    const bool is_best = std::all_of(metrics.begin(), metrics.end(), [&](const EpochMetrics& m) {
      return c.lower_is_better ? best.*c.field <= m.*c.field : best.*c.field >= m.*c.field;
    });
    if (is_best) agreed.push_back(c.name);
  }
  CheckpointChoice choice;
  choice.epoch = best.epoch;
  choice.rationale = agreed.size() == kCriteria.size() ? "unanimous" : fmt::format("{}", fmt::join(agreed, ", "));
  return choice;
}

}  // namespace aihq
