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

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <tuple>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aihq/error.hpp"
#include "aihq/instrument.hpp"

namespace aihq::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(AIHQ_FIXTURE_DIR) / name;
}

inline std::filesystem::path golden(const std::string& name) {
  return std::filesystem::path(AIHQ_GOLDEN_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("aihq-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

/// Catalog with ids 1-5 ambiguous, 6-10 intentional, 11-15 accidental and
/// placeholder texts.
inline Catalog standard_catalog() {
  std::vector<ScenarioSpec> specs;
  for (int id = 1; id <= kScenarioCount; ++id) {
    const auto type = id <= 5 ? ScenarioType::Ambiguous : id <= 10 ? ScenarioType::Intentional : ScenarioType::Accidental;
    specs.push_back({id, type, "Scenario text " + std::to_string(id) + "."});
  }
  return Catalog(std::move(specs));
}

inline double clamp_rating(double v) { return std::clamp(v, 1.0, 5.0); }

/// Synthetic dataset: `n` participants, all 15 scenarios, integer ratings
/// drawn around a per-participant latent level. Group labels alternate
/// TBI/HC; `group_gap` shifts TBI latent levels up.
struct SyntheticOptions {
  std::size_t participants = 30;
  double latent_sd = 0.8;
  double item_noise = 0.6;
  double group_gap = 0.0;
  bool self_reports = true;
  std::uint64_t seed = 7;
};

inline Dataset synthetic_dataset(const SyntheticOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const Catalog cat = standard_catalog();
  Dataset d;
  for (std::size_t i = 0; i < o.participants; ++i) {
    ParticipantRecord p;
    char buf[16];
    std::snprintf(buf, sizeof buf, "S%04zu", i);
    p.participant_id = buf;
    p.group = i % 2 == 0 ? Group::TBI : Group::HC;
    const double level = 3.0 + o.latent_sd * z(rng) + (p.group == Group::TBI ? o.group_gap : 0.0);
    for (const auto& s : cat.scenarios()) {
      p.scenario_types[s.scenario_id] = s.scenario_type;
      for (Construct c : kConstructs) {
        ItemResponse r;
        r.scenario_id = s.scenario_id;
        r.construct = c;
        r.text = "response " + std::to_string(i) + "/" + std::to_string(s.scenario_id);
        for (int k = 0; k < 2; ++k) {
          r.human_ratings.push_back(static_cast<int>(std::lround(clamp_rating(level + o.item_noise * z(rng)))));
        }
        p.responses.push_back(std::move(r));
      }
      if (o.self_reports) {
        auto sr = [&](int max) { return static_cast<int>(std::lround(std::clamp(level + o.item_noise * z(rng), 1.0, double(max)))); };
        p.self_reports[s.scenario_id] = SelfReport{sr(5), sr(5), sr(6)};
      }
    }
    std::sort(p.responses.begin(), p.responses.end(), [](const auto& a, const auto& b) {
      return std::tie(a.scenario_id, a.construct) < std::tie(b.scenario_id, b.construct);
    });
    d.push_back(std::move(p));
  }
  return d;
}

}  // namespace aihq::testing
