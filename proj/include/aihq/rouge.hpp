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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace aihq::stats {

enum class RougeVariant { R1, R2, RL, RLsum };

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Lowercased runs of ASCII alphanumerics.
std::vector<std::string> rouge_tokenize(std::string_view text);

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// R1/R2 use clipped n-gram overlap, RL the longest common subsequence, and
/// RLsum the summary-level union LCS over newline-separated sentences.
/// Anything with an empty side scores 0.
RougeScore rouge(std::string_view candidate, std::string_view reference, RougeVariant variant);

}  // namespace aihq::stats
