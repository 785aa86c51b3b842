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

#include "fsc/error.hpp"

namespace fsc {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyTerm: return "EmptyTerm";
    case ErrorCode::EmptyPrompt: return "EmptyPrompt";
    case ErrorCode::BackendUnreachable: return "BackendUnreachable";
    case ErrorCode::MalformedBackendResponse: return "MalformedBackendResponse";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::CorruptSession: return "CorruptSession";
    case ErrorCode::MissingRecording: return "MissingRecording";
    case ErrorCode::NoJsonArrayFound: return "NoJsonArrayFound";
    case ErrorCode::ExtractionFailed: return "ExtractionFailed";
    case ErrorCode::MissingPlaceholder: return "MissingPlaceholder";
    case ErrorCode::NoSamples: return "NoSamples";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::ConstantInput: return "ConstantInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MalformedCorrection: return "MalformedCorrection";
    case ErrorCode::EmptyRun: return "EmptyRun";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace fsc
