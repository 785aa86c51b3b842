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

#include "fsc/kg.hpp"

#include <algorithm>
#include <functional>

#include <unicode/uchar.h>
#include <unicode/ustring.h>
#include <unicode/utf16.h>

#include "fsc/error.hpp"

namespace fsc {

namespace {

constexpr UChar32 kReplacement = 0xFFFD;

std::u16string to_utf16(std::string_view utf8) {
    if (utf8.empty()) {
        return {};
    }
    UErrorCode status = U_ZERO_ERROR;
    int32_t needed = 0;
    u_strFromUTF8WithSub(nullptr, 0, &needed, utf8.data(), static_cast<int32_t>(utf8.size()), kReplacement,
                         nullptr, &status);
    std::u16string out(static_cast<std::size_t>(needed), u'\0');
    status = U_ZERO_ERROR;
    u_strFromUTF8WithSub(out.data(), needed, nullptr, utf8.data(), static_cast<int32_t>(utf8.size()),
                         kReplacement, nullptr, &status);
    return out;
}

std::string to_utf8(const std::u16string& utf16) {
    if (utf16.empty()) {
        return {};
    }
    UErrorCode status = U_ZERO_ERROR;
    int32_t needed = 0;
    u_strToUTF8WithSub(nullptr, 0, &needed, utf16.data(), static_cast<int32_t>(utf16.size()), kReplacement,
                       nullptr, &status);
    std::string out(static_cast<std::size_t>(needed), '\0');
    status = U_ZERO_ERROR;
    u_strToUTF8WithSub(out.data(), needed, nullptr, utf16.data(), static_cast<int32_t>(utf16.size()),
                       kReplacement, nullptr, &status);
    return out;
}

std::u16string collapse16(const std::u16string& in) {
    std::u16string out;
    out.reserve(in.size());
    bool pending_space = false;
    int32_t i = 0;
    const auto n = static_cast<int32_t>(in.size());
    while (i < n) {
        UChar32 c;
        const int32_t start = i;
        U16_NEXT(in.data(), i, n, c);
        if (u_isUWhiteSpace(c) || c == 0) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(u' ');
            pending_space = false;
        }
        out.append(in, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
    }
    return out;
}

std::u16string fold16(const std::u16string& in) {
    if (in.empty()) {
        return {};
    }
    UErrorCode status = U_ZERO_ERROR;
    const int32_t needed =
        u_strFoldCase(nullptr, 0, in.data(), static_cast<int32_t>(in.size()), U_FOLD_CASE_DEFAULT, &status);
    std::u16string out(static_cast<std::size_t>(needed), u'\0');
    status = U_ZERO_ERROR;
    u_strFoldCase(out.data(), needed, in.data(), static_cast<int32_t>(in.size()), U_FOLD_CASE_DEFAULT, &status);
    return out;
}

void hash_combine(std::size_t& seed, std::size_t value) noexcept {
    seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

} // namespace

std::string collapse_whitespace(std::string_view raw) { return to_utf8(collapse16(to_utf16(raw))); }

std::string canonicalize(std::string_view raw) {
    // Folding can expand characters but never introduces whitespace, so the
    // collapse step is stable under it.
    return to_utf8(fold16(collapse16(to_utf16(raw))));
}

Term normalize_term(std::string_view raw) {
    std::string normalized = canonicalize(raw);
    if (normalized.empty()) {
        throw Error(ErrorCode::EmptyTerm, "term has no non-whitespace characters");
    }
    return Term{std::string(raw), std::move(normalized)};
}

Fact Fact::make(std::string_view head, std::string_view relation, std::string_view tail) {
    return Fact{normalize_term(head), normalize_term(relation), normalize_term(tail)};
}

std::string Fact::display() const {
    return "(" + collapse_whitespace(head.raw) + ", " + collapse_whitespace(relation.raw) + ", " +
           collapse_whitespace(tail.raw) + ")";
}

std::size_t FactHash::operator()(const Fact& f) const noexcept {
    std::hash<std::string> h;
    std::size_t seed = h(f.head.normalized);
    hash_combine(seed, h(f.relation.normalized));
    hash_combine(seed, h(f.tail.normalized));
    return seed;
}

bool TermSet::insert(const Term& term) { return terms_.try_emplace(term.normalized, term).second; }

void TermSet::insert_all(const TermSet& other) {
    for (const auto& [key, term] : other.terms_) {
        terms_.try_emplace(key, term);
    }
}

std::vector<Term> TermSet::items() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [key, term] : terms_) {
        out.push_back(term);
    }
    return out;
}

std::vector<std::string> TermSet::raw_forms() const {
    std::vector<std::string> out;
    out.reserve(terms_.size());
    for (const auto& [key, term] : terms_) {
        out.push_back(collapse_whitespace(term.raw));
    }
    return out;
}

bool TermSet::includes(const TermSet& other) const {
    return std::all_of(other.terms_.begin(), other.terms_.end(),
                       [this](const auto& kv) { return terms_.contains(kv.first); });
}

bool operator==(const TermSet& a, const TermSet& b) {
    return a.terms_.size() == b.terms_.size() &&
           std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                      [](const auto& x, const auto& y) { return x.first == y.first; });
}

KnowledgeGraph::KnowledgeGraph(std::initializer_list<Fact> facts) {
    for (const auto& f : facts) {
        insert(f);
    }
}

bool KnowledgeGraph::insert(const Fact& fact) {
    if (!index_.insert(fact).second) {
        return false;
    }
    facts_.push_back(fact);
    return true;
}

TermSet KnowledgeGraph::entities() const {
    TermSet out;
    for (const auto& f : facts_) {
        out.insert(f.head);
        out.insert(f.tail);
    }
    return out;
}

TermSet KnowledgeGraph::relations() const {
    TermSet out;
    for (const auto& f : facts_) {
        out.insert(f.relation);
    }
    return out;
}

std::vector<Fact> KnowledgeGraph::sorted() const {
    std::vector<Fact> out = facts_;
    std::sort(out.begin(), out.end());
    return out;
}

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    return a.size() == b.size() && std::all_of(a.begin(), a.end(), [&](const Fact& f) { return b.contains(f); });
}

bool kg_contains(const KnowledgeGraph& kg, const Fact& fact) { return kg.contains(fact); }

KnowledgeGraph kg_union(std::span<const KnowledgeGraph> kgs) {
    KnowledgeGraph out;
    for (const auto& kg : kgs) {
        for (const auto& f : kg) {
            out.insert(f);
        }
    }
    return out;
}

KnowledgeGraph restrict_kg(const KnowledgeGraph& kg, const Schema& schema) {
    KnowledgeGraph out;
    for (const auto& f : kg) {
        if (schema.entities.contains(f.head) && schema.relations.contains(f.relation) &&
            schema.entities.contains(f.tail)) {
            out.insert(f);
        }
    }
    return out;
}

Schema schema_of(const KnowledgeGraph& kg) { return Schema{kg.entities(), kg.relations()}; }

void to_json(nlohmann::json& j, const Term& t) { j = t.raw; }

void from_json(const nlohmann::json& j, Term& t) { t = normalize_term(j.get<std::string>()); }

void to_json(nlohmann::json& j, const Fact& f) { j = nlohmann::json::array({f.head.raw, f.relation.raw, f.tail.raw}); }

void from_json(const nlohmann::json& j, Fact& f) {
    if (!j.is_array() || j.size() != 3) {
        throw nlohmann::json::type_error::create(302, "fact must be a 3-element array", &j);
    }
    f = Fact::make(j.at(0).get<std::string>(), j.at(1).get<std::string>(), j.at(2).get<std::string>());
}

void to_json(nlohmann::json& j, const KnowledgeGraph& kg) {
    j = nlohmann::json::array();
    for (const auto& f : kg) {
        j.push_back(f);
    }
}

void from_json(const nlohmann::json& j, KnowledgeGraph& kg) {
    kg = KnowledgeGraph{};
    for (const auto& item : j) {
        kg.insert(item.get<Fact>());
    }
}

void to_json(nlohmann::json& j, const TermSet& s) {
    j = nlohmann::json::array();
    for (const auto& t : s.items()) {
        j.push_back(t.raw);
    }
}

void from_json(const nlohmann::json& j, TermSet& s) {
    s = TermSet{};
    for (const auto& item : j) {
        s.insert(item.get<Term>());
    }
}

void to_json(nlohmann::json& j, const Schema& s) { j = {{"entities", s.entities}, {"relations", s.relations}}; }

void from_json(const nlohmann::json& j, Schema& s) {
    s.entities = j.at("entities").get<TermSet>();
    s.relations = j.at("relations").get<TermSet>();
}

} // namespace fsc
