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

#include <string>
#include <string_view>

#include "fsc/extraction.hpp"
#include "fsc/scoring.hpp"

namespace fsc {

/// penwidth = kDotMaxPenwidth * score, never below kDotMinPenwidth.
inline constexpr double kDotMaxPenwidth = 6.0;
inline constexpr double kDotMinPenwidth = 0.1;

/// Quoted DOT ID with '"' and '\' escaped and newlines as \n.
std::string dot_quote(std::string_view text);

/// Digraph of the passage KG: one edge per fact, labeled with the relation
/// and score. Red when score > threshold, green otherwise, gray dashed when
/// the fact has no score.
std::string export_dot(const ScoreReport& report, const PassageExtraction& extraction, double threshold);

} // namespace fsc
