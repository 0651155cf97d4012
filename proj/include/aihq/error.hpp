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

#include <stdexcept>
#include <string>
#include <string_view>

namespace aihq {

enum class ErrorCode {
  InvalidArgument,
  Io,
  // instrument
  InvalidCsv,
  MissingColumn,
  DuplicateItem,
  RatingOutOfRange,
  UnknownScenarioId,
  UnknownGroupLabel,
  ScenarioTypeMismatch,
  // scoring
  EmptyResponse,
  EmptyScenarioText,
  // backends
  BackendUnavailable,
  AuthFailure,
  RateLimited,
  Timeout,
  MalformedResponse,
  InvalidBackendConfig,
  // finetune
  EmptyStratum,
  MissingHumanRating,
  EmptyMetrics,
  // stats
  LengthMismatch,
  DegenerateVariance,
  TooFewSamples,
  InvalidDf,
  MissingCells,
  TooFewSubjects,
  EmptyCell,
  MissingSelfReports,
  // service
  UnhealthyBackend,
  PayloadTooLarge,
  UnknownJob,
  NotReady,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code; the
/// message is meant for humans and may name the offending row, column or item.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aihq
