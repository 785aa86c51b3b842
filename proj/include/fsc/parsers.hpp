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

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsc/kg.hpp"

namespace fsc {

enum class YesNoVerdict { yes, no, invalid };

std::string_view to_string(YesNoVerdict v) noexcept;

/// Splits on anything that is not an ASCII letter or digit and lowercases
/// ASCII. Bytes >= 0x80 are kept inside tokens.
std::set<std::string> word_tokens(std::string_view raw);

/// "yes" without "no" is yes, "no" without "yes" is no, anything else is
/// invalid. Total.
YesNoVerdict parse_yes_no(std::string_view raw);

struct TripleParse {
    std::vector<Fact> facts;
    std::size_t skipped_lines = 0;
};

/// One CSV record per line, three fields, double-quote quoting. Blank lines
/// are ignored; every other line that does not yield a fact is counted as
/// skipped. Order and duplicates are preserved. Total.
TripleParse parse_triples(std::string_view raw);

/// Splits one line into CSV fields. Returns nullopt on an unterminated quote
/// or stray characters after a closing quote.
std::optional<std::vector<std::string>> split_csv_record(std::string_view line);

/// Quoted CSV, one fact per line, using whitespace-collapsed raw forms.
std::string facts_to_csv(std::span<const Fact> facts);

/// Quotes a field only when it contains a comma, quote, or leading/trailing
/// space.
std::string csv_field(std::string_view value);

enum class ListKind { entities, relations };

/// First well-formed JSON array of strings in `raw`, tolerating surrounding
/// prose and code fences. Normalized and deduplicated, first spelling wins,
/// order preserved. Blank strings are dropped. Throws Error(NoJsonArrayFound).
std::vector<Term> parse_json_list(std::string_view raw, ListKind kind);

} // namespace fsc
