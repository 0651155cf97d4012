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

#include "aihq/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fmt/format.h>
#include <json.hpp>
#include <mutex>
#include <thread>
#include <tuple>

#include "aihq/csv.hpp"

namespace aihq {

using ordered_json = nlohmann::ordered_json;

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

ScoreResult score_item(const ItemResponse& item, const ScenarioSpec& scenario, Backend& backend,
                       ScoreCache& cache, const ScoringOptions& options) {
  const PromptBundle bundle = build_prompt(item.construct, scenario, item.text, options.decoding);
  ScoreResult out;
  out.backend_id = backend.config().backend_id;
  out.prompt_digest = prompt_digest(bundle);
  const std::string key =
      cache_key(out.backend_id, backend.config().model_id, options.decoding, out.prompt_digest);

  if (auto hit = cache.lookup(key)) {
    out.rating = hit->rating;
    out.raw_output = std::move(hit->raw_output);
    out.flags = hit->flags;
    out.cache_hit = true;
    return out;
  }

  const int attempts = 1 + std::max(0, options.retry_budget);
  ScoreFlags retried;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) retried.set(ScoreFlag::Retried);
    out.raw_output = backend.complete(bundle);
    ParsedRating parsed = parse_rating(out.raw_output);
    out.rating = parsed.rating;
    out.flags = parsed.flags;
    if (retried.has(ScoreFlag::Retried)) out.flags.set(ScoreFlag::Retried);
    if (!parsed.flags.has(ScoreFlag::Unparseable)) break;
  }

  cache.insert(key, CacheEntry{out.rating, out.raw_output, out.flags, backend.config().model_id, {}});
  return out;
}

namespace {

struct WorkItem {
  const ParticipantRecord* participant;
  const ItemResponse* response;
  const ScenarioSpec* scenario;
};

void check_coverage(const Dataset& dataset, const Catalog& catalog) {
  for (const auto& p : dataset) {
    for (const auto& [sid, type] : p.scenario_types) {
      const ScenarioSpec& spec = catalog.at(sid);
      if (spec.scenario_type != type) {
        throw Error(ErrorCode::ScenarioTypeMismatch,
                    fmt::format("scenario {} is {} in the dataset but {} in the catalog", sid,
                                to_string(type), to_string(spec.scenario_type)));
      }
    }
    for (const auto& r : p.responses) (void)catalog.at(r.scenario_id);
  }
}

}  // namespace

ScoredDataset score_dataset(const Dataset& dataset, const Catalog& catalog, Backend& backend,
                            ScoreCache& cache, const ScoringOptions& options,
                            const ProgressFn& progress, std::stop_token stop) {
  check_coverage(dataset, catalog);

  std::vector<const ParticipantRecord*> participants;
  for (const auto& p : dataset) participants.push_back(&p);
  std::sort(participants.begin(), participants.end(),
            [](auto* a, auto* b) { return a->participant_id < b->participant_id; });

  std::vector<WorkItem> work;
  for (const auto* p : participants) {
    std::vector<const ItemResponse*> rs;
    for (const auto& r : p->responses) rs.push_back(&r);
    std::sort(rs.begin(), rs.end(), [](auto* a, auto* b) {
      return std::tie(a->scenario_id, a->construct) < std::tie(b->scenario_id, b->construct);
    });
    for (const auto* r : rs) work.push_back({p, r, &catalog.at(r->scenario_id)});
  }

  ScoredDataset scored;
  scored.items.resize(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    auto& o = scored.items[i];
    o.participant_id = work[i].participant->participant_id;
    o.group = work[i].participant->group;
    o.scenario_id = work[i].response->scenario_id;
    o.scenario_type = work[i].scenario->scenario_type;
    o.construct = work[i].response->construct;
  }

  const std::uint64_t calls_before = backend.calls();
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      if (stop.stop_requested()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      auto& o = scored.items[i];
      try {
        o.result = score_item(*work[i].response, *work[i].scenario, backend, cache, options);
      } catch (const Error& e) {
        o.error_code = e.code();
        o.error = e.what();
      } catch (const std::exception& e) {
        o.error_code = ErrorCode::BackendUnavailable;
        o.error = e.what();
      }
      const std::size_t n = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(n, work.size());
      }
    }
  };

  const std::size_t threads =
      std::clamp<std::size_t>(options.parallelism, 1, std::max<std::size_t>(1, work.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  auto& m = scored.manifest;
  m.items_total = work.size();
  m.backend_calls = static_cast<std::size_t>(backend.calls() - calls_before);
  m.cancelled = stop.stop_requested() && done.load() < work.size();
  for (const char* f : {"lenient", "retried", "unparseable", "out_of_range"}) m.flag_counts[f] = 0;
  for (const auto& o : scored.items) {
    if (o.result) {
      if (o.result->cache_hit) ++m.cache_hits;
      if (o.result->rating) ++m.items_rated;
      const auto& fl = o.result->flags;
      if (fl.has(ScoreFlag::Lenient)) ++m.flag_counts["lenient"];
      if (fl.has(ScoreFlag::Retried)) ++m.flag_counts["retried"];
      if (fl.has(ScoreFlag::Unparseable)) ++m.flag_counts["unparseable"];
      if (fl.has(ScoreFlag::OutOfRange)) ++m.flag_counts["out_of_range"];
      if (!o.result->rating) {
        m.failures.push_back({o.participant_id, o.scenario_id, o.construct,
                              fl.has(ScoreFlag::OutOfRange) ? "out_of_range" : "unparseable"});
      }
    } else if (o.error_code) {
      m.failures.push_back({o.participant_id, o.scenario_id, o.construct,
                            fmt::format("{}: {}", to_string(*o.error_code), o.error)});
    } else {
      m.failures.push_back({o.participant_id, o.scenario_id, o.construct, "cancelled"});
    }
  }

  std::size_t i = 0;
  for (const auto* p : participants) {
    std::array<std::map<int, int>, 2> ratings;
    for (; i < scored.items.size() && scored.items[i].participant_id == p->participant_id; ++i) {
      const auto& o = scored.items[i];
      if (o.result && o.result->rating) ratings[index_of(o.construct)][o.scenario_id] = *o.result->rating;
    }
    ParticipantScales s;
    s.participant_id = p->participant_id;
    s.group = p->group;
    for (Construct c : kConstructs) s.by_construct[index_of(c)] = aggregate_scales(ratings[index_of(c)], catalog);
    scored.scales.push_back(std::move(s));
  }
  return scored;
}

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

std::string write_results_csv(const ScoredDataset& scored) {
  std::string out;
  csv::append_row(out, {"participant_id", "group", "scenario_id", "scenario_type", "construct",
                        "rating", "flags", "backend_id", "prompt_digest", "raw_output", "error"});
  for (const auto& o : scored.items) {
    const ScoreResult* r = o.result ? &*o.result : nullptr;
    csv::append_row(out, {o.participant_id, std::string(to_string(o.group)),
                          std::to_string(o.scenario_id), std::string(to_string(o.scenario_type)),
                          std::string(to_string(o.construct)),
                          r && r->rating ? std::to_string(*r->rating) : "",
                          r ? r->flags.to_string() : "", r ? r->backend_id : "",
                          r ? r->prompt_digest : "", r ? r->raw_output : "",
                          o.error_code ? fmt::format("{}: {}", to_string(*o.error_code), o.error) : ""});
  }
  out += "\n";
  csv::append_row(out, {"participant_id", "group", "construct", "ambiguous", "intentional",
                        "accidental", "overall", "n_ambiguous", "n_intentional", "n_accidental"});
  for (const auto& s : scored.scales) {
    for (Construct c : kConstructs) {
      const auto& sc = s.by_construct[index_of(c)];
      csv::append_row(out, {s.participant_id, std::string(to_string(s.group)),
                            std::string(to_string(c)), opt_number(sc.per_type_mean[0]),
                            opt_number(sc.per_type_mean[1]), opt_number(sc.per_type_mean[2]),
                            opt_number(sc.overall_mean), std::to_string(sc.n_items_used[0]),
                            std::to_string(sc.n_items_used[1]), std::to_string(sc.n_items_used[2])});
    }
  }
  return out;
}

namespace {

ordered_json opt_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json manifest_json(const ScoringManifest& m) {
  ordered_json j;
  j["items_total"] = m.items_total;
  j["items_rated"] = m.items_rated;
  j["cache_hits"] = m.cache_hits;
  j["backend_calls"] = m.backend_calls;
  j["flag_counts"] = ordered_json::object();
  for (const auto& [k, v] : m.flag_counts) j["flag_counts"][k] = v;
  j["failures"] = ordered_json::array();
  for (const auto& f : m.failures) {
    j["failures"].push_back({{"participant_id", f.participant_id},
                             {"scenario_id", f.scenario_id},
                             {"construct", to_string(f.construct)},
                             {"reason", f.reason}});
  }
  j["cancelled"] = m.cancelled;
  return j;
}

std::string dump(const ordered_json& j) {
  return j.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

}  // namespace

std::string write_results_json(const ScoredDataset& scored) {
  ordered_json j;
  j["items"] = ordered_json::array();
  for (const auto& o : scored.items) {
    ordered_json it;
    it["participant_id"] = o.participant_id;
    it["group"] = to_string(o.group);
    it["scenario_id"] = o.scenario_id;
    it["scenario_type"] = to_string(o.scenario_type);
    it["construct"] = to_string(o.construct);
    const ScoreResult* r = o.result ? &*o.result : nullptr;
    it["rating"] = r && r->rating ? ordered_json(*r->rating) : ordered_json(nullptr);
    it["flags"] = ordered_json::array();
    if (r) {
      for (auto [flag, name] : {std::pair{ScoreFlag::Lenient, "lenient"},
                                std::pair{ScoreFlag::Retried, "retried"},
                                std::pair{ScoreFlag::Unparseable, "unparseable"},
                                std::pair{ScoreFlag::OutOfRange, "out_of_range"}}) {
        if (r->flags.has(flag)) it["flags"].push_back(name);
      }
    }
    it["backend_id"] = r ? r->backend_id : "";
    it["prompt_digest"] = r ? r->prompt_digest : "";
    it["raw_output"] = r ? r->raw_output : "";
    it["error"] = o.error_code ? ordered_json(fmt::format("{}: {}", to_string(*o.error_code), o.error))
                               : ordered_json(nullptr);
    j["items"].push_back(std::move(it));
  }
  j["scales"] = ordered_json::array();
  for (const auto& s : scored.scales) {
    for (Construct c : kConstructs) {
      const auto& sc = s.by_construct[index_of(c)];
      ordered_json row;
      row["participant_id"] = s.participant_id;
      row["group"] = to_string(s.group);
      row["construct"] = to_string(c);
      for (ScenarioType t : kScenarioTypes) row[std::string(to_string(t))] = opt_json(sc.per_type_mean[index_of(t)]);
      row["overall"] = opt_json(sc.overall_mean);
      row["n_items"] = sc.n_items_used;
      j["scales"].push_back(std::move(row));
    }
  }
  j["manifest"] = manifest_json(scored.manifest);
  return dump(j);
}

std::string write_manifest_json(const ScoringManifest& manifest) { return dump(manifest_json(manifest)); }

std::string write_merged_csv(const Dataset& dataset, const ScoredDataset& scored) {
  std::map<std::tuple<std::string, int, Construct>, int> ratings;
  for (const auto& o : scored.items) {
    if (o.result && o.result->rating) ratings[{o.participant_id, o.scenario_id, o.construct}] = *o.result->rating;
  }
  ExtraColumns extra;
  extra.names = {"model_hostility", "model_aggression"};
  extra.values = [&](const ParticipantRecord& p, int sid) {
    std::vector<std::string> v;
    for (Construct c : kConstructs) {
      auto it = ratings.find({p.participant_id, sid, c});
      v.push_back(it == ratings.end() ? "" : std::to_string(it->second));
    }
    return v;
  };
  return write_dataset_csv(dataset, &extra);
}

}  // namespace aihq
