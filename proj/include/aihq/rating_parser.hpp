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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace aihq {

enum class ScoreFlag : std::uint8_t {
  Lenient = 1U << 0,
  Retried = 1U << 1,
  Unparseable = 1U << 2,
  OutOfRange = 1U << 3,
};

class ScoreFlags {
 public:
  constexpr ScoreFlags() = default;

  constexpr void set(ScoreFlag f) noexcept { bits_ |= static_cast<std::uint8_t>(f); }
  constexpr void clear(ScoreFlag f) noexcept { bits_ &= static_cast<std::uint8_t>(~static_cast<std::uint8_t>(f)); }
  [[nodiscard]] constexpr bool has(ScoreFlag f) const noexcept {
    return (bits_ & static_cast<std::uint8_t>(f)) != 0;
  }
  [[nodiscard]] constexpr bool empty() const noexcept { return bits_ == 0; }

  /// "lenient|retried" etc. in declaration order; empty string for no flags.
  [[nodiscard]] std::string to_string() const;
  static std::optional<ScoreFlags> parse(std::string_view s);

  friend constexpr bool operator==(ScoreFlags, ScoreFlags) = default;

 private:
  std::uint8_t bits_ = 0;
};

struct ParsedRating {
  std::optional<int> rating;
  ScoreFlags flags;
};

/// Two passes. Strict: the trimmed output, minus at most one trailing period,
/// is a single integer. Lenient: integer tokens are scanned out of prose and
/// accepted only when exactly one distinct in-range value appears.
/// A missing rating always carries Unparseable or OutOfRange. Decimal
/// numbers such as "3.5" are never rounded into a rating.
ParsedRating parse_rating(std::string_view raw);

}  // namespace aihq
