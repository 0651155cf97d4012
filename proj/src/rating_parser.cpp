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

#include "aihq/rating_parser.hpp"

#include <cctype>
#include <set>
#include <vector>

#include "aihq/instrument.hpp"
#include "aihq/strings.hpp"

namespace aihq {

namespace {

constexpr std::pair<ScoreFlag, std::string_view> kFlagNames[] = {
    {ScoreFlag::Lenient, "lenient"},
    {ScoreFlag::Retried, "retried"},
    {ScoreFlag::Unparseable, "unparseable"},
    {ScoreFlag::OutOfRange, "out_of_range"},
};

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool in_range(long long v) { return v >= kMinRating && v <= kMaxRating; }

struct Scan {
  std::vector<long long> integers;
  bool saw_decimal = false;
};

// Integer tokens are maximal digit runs bounded by non-alphanumerics. A run
// joined to another run by a single '.' or ',' forms a decimal, which poisons
// the lenient pass.
Scan scan_numbers(std::string_view s) {
  Scan scan;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_digit(s[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    std::size_t end = i;
    bool decimal = false;
    while (end + 1 < s.size() && (s[end] == '.' || s[end] == ',') && is_digit(s[end + 1])) {
      decimal = true;
      end += 1;
      while (end < s.size() && is_digit(s[end])) ++end;
    }
    i = end;
    const bool glued_left = start > 0 && (is_alnum(s[start - 1]) ||
                                          (s[start - 1] == '.' && start > 1 && is_digit(s[start - 2])));
    const bool glued_right = end < s.size() && is_alnum(s[end]);
    if (decimal) {
      scan.saw_decimal = true;
      continue;
    }
    if (glued_left || glued_right) continue;
    const auto digits = s.substr(start, end - start);
    long long value = 0;
    for (char c : digits) {
      value = value * 10 + (c - '0');
      if (value > 1'000'000) break;
    }
    const bool negative = start > 0 && s[start - 1] == '-' && (start == 1 || !is_alnum(s[start - 2]));
    scan.integers.push_back(negative ? -value : value);
  }
  return scan;
}

}  // namespace

std::string ScoreFlags::to_string() const {
  std::string out;
  for (const auto& [flag, name] : kFlagNames) {
    if (!has(flag)) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  return out;
}

std::optional<ScoreFlags> ScoreFlags::parse(std::string_view s) {
  ScoreFlags flags;
  s = trim(s);
  while (!s.empty()) {
    const auto bar = s.find('|');
    const auto part = trim(s.substr(0, bar));
    bool known = false;
    for (const auto& [flag, name] : kFlagNames) {
      if (part == name) {
        flags.set(flag);
        known = true;
      }
    }
    if (!known) return std::nullopt;
    if (bar == std::string_view::npos) break;
    s.remove_prefix(bar + 1);
  }
  return flags;
}

ParsedRating parse_rating(std::string_view raw) {
  ParsedRating result;

  auto strict = trim(raw);
  if (strict.ends_with('.')) strict = trim(strict.substr(0, strict.size() - 1));
  if (auto value = parse_int(strict)) {
    if (in_range(*value)) {
      result.rating = *value;
    } else {
      result.flags.set(ScoreFlag::OutOfRange);
    }
    return result;
  }

  const auto scan = scan_numbers(raw);
  std::set<long long> candidates;
  bool out_of_range = false;
  for (auto v : scan.integers) {
    if (in_range(v)) {
      candidates.insert(v);
    } else {
      out_of_range = true;
    }
  }
  if (!scan.saw_decimal && candidates.size() == 1) {
    result.rating = static_cast<int>(*candidates.begin());
    result.flags.set(ScoreFlag::Lenient);
  } else if (!scan.saw_decimal && candidates.empty() && out_of_range) {
    result.flags.set(ScoreFlag::OutOfRange);
  } else {
    result.flags.set(ScoreFlag::Unparseable);
  }
  return result;
}

}  // namespace aihq
