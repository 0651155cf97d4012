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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aihq::csv {

/// A parsed RFC 4180 document. Row numbers are 1-based physical record
/// numbers with the header as record 1, so they match what a spreadsheet shows.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_numbers;

  [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

/// Quoted fields may contain commas, doubled quotes and newlines. A UTF-8 BOM
/// and CRLF line endings are accepted. Throws InvalidCsv on an unterminated
/// quote or a row whose width differs from the header.
Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
void append_row(std::string& out, const std::vector<std::string>& fields);

std::string read_text_file(const std::filesystem::path& path);
/// Writes via a sibling temporary file and rename.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace aihq::csv
