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

#include "aihq/cache.hpp"

#include <fmt/format.h>
#include <json.hpp>
#include <mutex>

#include "aihq/digest.hpp"
#include "aihq/error.hpp"
#include "aihq/strings.hpp"

namespace aihq {

using ordered_json = nlohmann::ordered_json;

std::string cache_key(std::string_view backend_id, std::string_view model_id,
                      const DecodingParams& decoding, std::string_view prompt_digest) {
  return sha256_hex(fmt::format("{}\x1f{}\x1f{:.17g}\x1f{}\x1f{}", backend_id, model_id,
                                decoding.temperature, decoding.max_tokens, prompt_digest));
}

ScoreCache::ScoreCache(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(*path_)) {
    std::ifstream in(*path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        const auto j = ordered_json::parse(line);
        CacheEntry e;
        if (!j.at("rating").is_null()) e.rating = j.at("rating").get<int>();
        e.raw_output = j.at("raw_output").get<std::string>();
        e.flags = ScoreFlags::parse(j.at("flags").get<std::string>()).value_or(ScoreFlags{});
        e.model_id = j.at("model_id").get<std::string>();
        e.timestamp = j.value("timestamp", "");
        entries_[j.at("key").get<std::string>()] = std::move(e);
      } catch (const std::exception&) {
        // torn or foreign line
      }
    }
  }
  if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
  out_.open(*path_, std::ios::app | std::ios::binary);
  if (!out_) throw Error(ErrorCode::Io, "cannot open cache file " + path_->string());
}

std::optional<CacheEntry> ScoreCache::lookup(const std::string& key) const {
  std::shared_lock lock(mutex_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

void ScoreCache::insert(const std::string& key, CacheEntry entry) {
  if (entry.timestamp.empty()) entry.timestamp = utc_timestamp();
  std::unique_lock lock(mutex_);
  if (path_) {
    ordered_json j;
    j["key"] = key;
    j["model_id"] = entry.model_id;
    j["rating"] = entry.rating ? ordered_json(*entry.rating) : ordered_json(nullptr);
    j["raw_output"] = entry.raw_output;
    j["flags"] = entry.flags.to_string();
    j["timestamp"] = entry.timestamp;
    out_ << j.dump(-1, ' ', false, ordered_json::error_handler_t::replace) << '\n';
    out_.flush();
  }
  entries_[key] = std::move(entry);
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace aihq
