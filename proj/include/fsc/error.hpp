// Copyright 2026 The FactSelfCheck Authors
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

namespace fsc {

enum class ErrorCode {
    EmptyTerm,
    EmptyPrompt,
    BackendUnreachable,
    MalformedBackendResponse,
    BudgetExceeded,
    CorruptSession,
    MissingRecording,
    NoJsonArrayFound,
    ExtractionFailed,
    MissingPlaceholder,
    NoSamples,
    SchemaMismatch,
    UnknownLabel,
    DegenerateLabels,
    ConstantInput,
    LengthMismatch,
    MalformedCorrection,
    EmptyRun,
    IdMismatch,
    Precondition,
    Config,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

    /// BackendUnreachable is the only transient failure.
    [[nodiscard]] bool retryable() const noexcept { return code_ == ErrorCode::BackendUnreachable; }

  private:
    ErrorCode code_;
};

} // namespace fsc
