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

#include "fsc/parsers.hpp"

#include <unordered_set>

#include <json.hpp>

#include "fsc/error.hpp"

namespace fsc {

namespace {

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_ascii_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_ascii_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

// Index one past the bracket matching raw[open], honoring JSON string escapes.
std::optional<std::size_t> matching_bracket(std::string_view raw, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < raw.size(); ++i) {
        const char c = raw[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            if (--depth == 0) {
                return i + 1;
            }
        }
    }
    return std::nullopt;
}

} // namespace

std::string_view to_string(YesNoVerdict v) noexcept {
    switch (v) {
    case YesNoVerdict::yes: return "yes";
    case YesNoVerdict::no: return "no";
    case YesNoVerdict::invalid: return "invalid";
    }
    return "invalid";
}

std::set<std::string> word_tokens(std::string_view raw) {
    std::set<std::string> tokens;
    std::string current;
    for (const char ch : raw) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_word_byte(c)) {
            current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
        } else if (!current.empty()) {
            tokens.insert(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.insert(std::move(current));
    }
    return tokens;
}

YesNoVerdict parse_yes_no(std::string_view raw) {
    const auto tokens = word_tokens(raw);
    const bool yes = tokens.contains("yes");
    const bool no = tokens.contains("no");
    if (yes && !no) {
        return YesNoVerdict::yes;
    }
    if (no && !yes) {
        return YesNoVerdict::no;
    }
    return YesNoVerdict::invalid;
}

std::optional<std::vector<std::string>> split_csv_record(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (true) {
        std::size_t j = i;
        while (j < n && (line[j] == ' ' || line[j] == '\t')) {
            ++j;
        }
        std::string field;
        if (j < n && line[j] == '"') {
            ++j;
            bool closed = false;
            while (j < n) {
                if (line[j] == '"') {
                    if (j + 1 < n && line[j + 1] == '"') {
                        field.push_back('"');
                        j += 2;
                        continue;
                    }
                    closed = true;
                    ++j;
                    break;
                }
                field.push_back(line[j++]);
            }
            if (!closed) {
                return std::nullopt;
            }
            while (j < n && (line[j] == ' ' || line[j] == '\t')) {
                ++j;
            }
            if (j < n && line[j] != ',') {
                return std::nullopt;
            }
        } else {
            const std::size_t comma = line.find(',', i);
            const std::size_t end = comma == std::string_view::npos ? n : comma;
            field = std::string(trim(line.substr(i, end - i)));
            j = end;
        }
        fields.push_back(std::move(field));
        if (j >= n) {
            break;
        }
        i = j + 1; // skip the comma
        if (i == n) {
            fields.emplace_back();
            break;
        }
    }
    return fields;
}

TripleParse parse_triples(std::string_view raw) {
    TripleParse result;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t nl = raw.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = raw.size();
        }
        const std::string_view line = trim(raw.substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty()) {
            continue;
        }
        if (line.starts_with("```")) {
            ++result.skipped_lines;
            continue;
        }
        const auto fields = split_csv_record(line);
        if (!fields || fields->size() != 3) {
            ++result.skipped_lines;
            continue;
        }
        const auto& f = *fields;
        if (canonicalize(f[0]).empty() || canonicalize(f[1]).empty() || canonicalize(f[2]).empty()) {
            ++result.skipped_lines;
            continue;
        }
        result.facts.push_back(Fact::make(f[0], f[1], f[2]));
    }
    return result;
}

std::string csv_field(std::string_view value) {
    const bool needs_quotes = value.find_first_of(",\"") != std::string_view::npos || value.empty() ||
                              is_ascii_space(value.front()) || is_ascii_space(value.back());
    if (!needs_quotes) {
        return std::string(value);
    }
    std::string out = "\"";
    for (const char c : value) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string facts_to_csv(std::span<const Fact> facts) {
    auto quoted = [](const Term& t) {
        std::string out = "\"";
        for (const char c : collapse_whitespace(t.raw)) {
            if (c == '"') {
                out.push_back('"');
            }
            out.push_back(c);
        }
        out.push_back('"');
        return out;
    };
    std::string out;
    for (const auto& f : facts) {
        out += quoted(f.head) + "," + quoted(f.relation) + "," + quoted(f.tail) + "\n";
    }
    return out;
}

std::vector<Term> parse_json_list(std::string_view raw, ListKind kind) {
    for (std::size_t open = raw.find('['); open != std::string_view::npos; open = raw.find('[', open + 1)) {
        const auto close = matching_bracket(raw, open);
        if (!close) {
            continue;
        }
        const auto parsed = nlohmann::json::parse(raw.substr(open, *close - open), nullptr, false);
        if (parsed.is_discarded() || !parsed.is_array()) {
            continue;
        }
        bool all_strings = true;
        for (const auto& item : parsed) {
            all_strings = all_strings && item.is_string();
        }
        if (!all_strings) {
            continue;
        }
        std::vector<Term> terms;
        std::unordered_set<std::string> seen;
        for (const auto& item : parsed) {
            const auto& s = item.get_ref<const std::string&>();
            if (canonicalize(s).empty()) {
                continue;
            }
            Term t = normalize_term(s);
            if (seen.insert(t.normalized).second) {
                terms.push_back(std::move(t));
            }
        }
        return terms;
    }
    throw Error(ErrorCode::NoJsonArrayFound,
                std::string("no JSON string array of ") + (kind == ListKind::entities ? "entities" : "relations") +
                    " in completion");
}

} // namespace fsc
