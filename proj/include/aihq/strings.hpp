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

#include <optional>
#include <string>
#include <string_view>

namespace aihq {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);

/// Optional sign then decimal digits only; nullopt for anything else,
/// including "3.0" and values that overflow int.
std::optional<int> parse_int(std::string_view s) noexcept;

/// Surrounding whitespace allowed; the rest must be a complete decimal number.
std::optional<double> parse_double(std::string_view s) noexcept;

/// Current UTC time as 2026-01-01T00:00:00Z.
std::string utc_timestamp();

}  // namespace aihq
