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

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include "aihq/prompts.hpp"
#include "aihq/rating_parser.hpp"

namespace aihq {

/// Switching backend, model or decoding parameters always yields a new key.
std::string cache_key(std::string_view backend_id, std::string_view model_id,
                      const DecodingParams& decoding, std::string_view prompt_digest);

struct CacheEntry {
  std::optional<int> rating;
  std::string raw_output;
  ScoreFlags flags;
  std::string model_id;
  std::string timestamp;
};

/// Append-only score cache. On disk, one JSON object per line:
///
///     {"key":"<hex>","model_id":"...","rating":3,"raw_output":"3","flags":"","timestamp":"2026-01-01T00:00:00Z"}
///
/// `rating` is null for outputs that never parsed. Later lines win. A torn
/// final line (crash mid-append) is ignored on load. Deleting the file forces
/// re-scoring.
class ScoreCache {
 public:
  /// Memory-only cache.
  ScoreCache() = default;
  /// Loads `path` if it exists and appends new entries to it.
  explicit ScoreCache(std::filesystem::path path);

  ScoreCache(const ScoreCache&) = delete;
  ScoreCache& operator=(const ScoreCache&) = delete;

  [[nodiscard]] std::optional<CacheEntry> lookup(const std::string& key) const;
  void insert(const std::string& key, CacheEntry entry);
  [[nodiscard]] std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, CacheEntry> entries_;
  std::optional<std::filesystem::path> path_;
  std::ofstream out_;
};

}  // namespace aihq
