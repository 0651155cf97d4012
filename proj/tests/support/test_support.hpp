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

#include <gtest/gtest.h>

#include <cstdlib>

#include "fixtures.hpp"

namespace aihq::testing {

/// Set AIHQ_UPDATE_GOLDEN=1 to rewrite goldens instead of comparing.
inline void expect_golden(const std::string& name, const std::string& actual) {
  const auto path = golden(name);
  if (const char* u = std::getenv("AIHQ_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << "missing golden " << path;
  EXPECT_EQ(slurp(path), actual) << "golden mismatch: " << name;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an aihq::Error";
  return ErrorCode::InvalidArgument;
}

#define EXPECT_AIHQ_ERROR(stmt, expected_code) \
  EXPECT_EQ(::aihq::testing::code_of([&] { (void)(stmt); }), ::aihq::ErrorCode::expected_code)

}  // namespace aihq::testing
