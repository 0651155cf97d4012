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

#include "aihq/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace aihq::stats {

namespace {

RougeScore from_counts(std::size_t hits, std::size_t candidate_total, std::size_t reference_total) {
  RougeScore s;
  if (candidate_total == 0 || reference_total == 0) return s;
  s.precision = static_cast<double>(hits) / static_cast<double>(candidate_total);
  s.recall = static_cast<double>(hits) / static_cast<double>(reference_total);
  if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

std::map<std::vector<std::string>, std::size_t> ngram_counts(const std::vector<std::string>& tokens,
                                                            std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

RougeScore rouge_n(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                   std::size_t n) {
  const auto c = ngram_counts(cand, n);
  const auto r = ngram_counts(ref, n);
  std::size_t hits = 0;
  for (const auto& [gram, count] : r) {
    if (auto it = c.find(gram); it != c.end()) hits += std::min(count, it->second);
  }
  const std::size_t cand_total = cand.size() >= n ? cand.size() - n + 1 : 0;
  const std::size_t ref_total = ref.size() >= n ? ref.size() - n + 1 : 0;
  return from_counts(hits, cand_total, ref_total);
}

using LcsTable = std::vector<std::vector<std::size_t>>;

LcsTable lcs_table(const std::vector<std::string>& ref, const std::vector<std::string>& cand) {
  LcsTable t(ref.size() + 1, std::vector<std::size_t>(cand.size() + 1, 0));
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    for (std::size_t j = 1; j <= cand.size(); ++j) {
      t[i][j] = ref[i - 1] == cand[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t;
}

// Positions in `ref` of one LCS with `cand`, backtracking from the end and
// preferring to drop reference tokens on ties.
std::vector<std::size_t> lcs_ref_indices(const std::vector<std::string>& ref,
                                         const std::vector<std::string>& cand) {
  const auto t = lcs_table(ref, cand);
  std::vector<std::size_t> out;
  std::size_t i = ref.size();
  std::size_t j = cand.size();
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      out.push_back(i - 1);
      --i;
      --j;
    } else if (t[i][j - 1] > t[i - 1][j]) {
      --j;
    } else {
      --i;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::string>> split_sentences(std::string_view text) {
  std::vector<std::vector<std::string>> sentences;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto tokens = rouge_tokenize(text.substr(start, end - start));
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
    start = end + 1;
  }
  return sentences;
}

RougeScore rouge_lsum(std::string_view candidate, std::string_view reference) {
  const auto cand = split_sentences(candidate);
  const auto ref = split_sentences(reference);
  std::size_t cand_total = 0;
  std::size_t ref_total = 0;
  std::map<std::string, std::size_t> cand_counts;
  std::map<std::string, std::size_t> ref_counts;
  for (const auto& s : cand) {
    cand_total += s.size();
    for (const auto& tok : s) ++cand_counts[tok];
  }
  for (const auto& s : ref) {
    ref_total += s.size();
    for (const auto& tok : s) ++ref_counts[tok];
  }
  if (cand_total == 0 || ref_total == 0) return {};

  std::size_t hits = 0;
  for (const auto& r : ref) {
    std::set<std::size_t> union_idx;
    for (const auto& c : cand) {
      for (auto idx : lcs_ref_indices(r, c)) union_idx.insert(idx);
    }
    for (auto idx : union_idx) {
      const auto& tok = r[idx];
      auto& cc = cand_counts[tok];
      auto& rc = ref_counts[tok];
      if (cc > 0 && rc > 0) {
        ++hits;
        --cc;
        --rc;
      }
    }
  }
  return from_counts(hits, cand_total, ref_total);
}

}  // namespace

std::vector<std::string> rouge_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return lcs_table(a, b)[a.size()][b.size()];
}

RougeScore rouge(std::string_view candidate, std::string_view reference, RougeVariant variant) {
  switch (variant) {
    case RougeVariant::R1:
      return rouge_n(rouge_tokenize(candidate), rouge_tokenize(reference), 1);
    case RougeVariant::R2:
      return rouge_n(rouge_tokenize(candidate), rouge_tokenize(reference), 2);
    case RougeVariant::RL: {
      const auto c = rouge_tokenize(candidate);
      const auto r = rouge_tokenize(reference);
      return from_counts(lcs_length(r, c), c.size(), r.size());
    }
    case RougeVariant::RLsum:
      return rouge_lsum(candidate, reference);
  }
  return {};
}

}  // namespace aihq::stats
