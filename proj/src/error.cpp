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

#include "aihq/error.hpp"

namespace aihq {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidCsv: return "InvalidCsv";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::DuplicateItem: return "DuplicateItem";
    case ErrorCode::RatingOutOfRange: return "RatingOutOfRange";
    case ErrorCode::UnknownScenarioId: return "UnknownScenarioId";
    case ErrorCode::UnknownGroupLabel: return "UnknownGroupLabel";
    case ErrorCode::ScenarioTypeMismatch: return "ScenarioTypeMismatch";
    case ErrorCode::EmptyResponse: return "EmptyResponse";
    case ErrorCode::EmptyScenarioText: return "EmptyScenarioText";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::AuthFailure: return "AuthFailure";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::InvalidBackendConfig: return "InvalidBackendConfig";
    case ErrorCode::EmptyStratum: return "EmptyStratum";
    case ErrorCode::MissingHumanRating: return "MissingHumanRating";
    case ErrorCode::EmptyMetrics: return "EmptyMetrics";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InvalidDf: return "InvalidDf";
    case ErrorCode::MissingCells: return "MissingCells";
    case ErrorCode::TooFewSubjects: return "TooFewSubjects";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::MissingSelfReports: return "MissingSelfReports";
    case ErrorCode::UnhealthyBackend: return "UnhealthyBackend";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::UnknownJob: return "UnknownJob";
    case ErrorCode::NotReady: return "NotReady";
  }
  return "Unknown";
}

}  // namespace aihq
