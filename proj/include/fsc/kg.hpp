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

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

namespace fsc {

/// Canonical matching form: trimmed, internal Unicode whitespace collapsed to
/// one space, Unicode default case folding. Invalid UTF-8 is replaced by
/// U+FFFD rather than rejected. Punctuation is kept as-is.
std::string canonicalize(std::string_view raw);

/// Trim and collapse whitespace only; case is preserved. Used wherever a raw
/// surface form is written back into a line-oriented format.
std::string collapse_whitespace(std::string_view raw);

/// An entity or relation surface form together with its matching key.
struct Term {
    std::string raw;
    std::string normalized;

    friend bool operator==(const Term& a, const Term& b) noexcept { return a.normalized == b.normalized; }
    friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
        return a.normalized <=> b.normalized;
    }
};

/// Throws Error(EmptyTerm) when `raw` holds no non-whitespace character.
Term normalize_term(std::string_view raw);

/// (head, relation, tail). Ordered; compared and hashed on normalized forms.
struct Fact {
    Term head;
    Term relation;
    Term tail;

    static Fact make(std::string_view head, std::string_view relation, std::string_view tail);

    friend bool operator==(const Fact& a, const Fact& b) noexcept {
        return a.head == b.head && a.relation == b.relation && a.tail == b.tail;
    }
    friend std::strong_ordering operator<=>(const Fact& a, const Fact& b) noexcept {
        if (auto c = a.head <=> b.head; c != 0) {
            return c;
        }
        if (auto c = a.relation <=> b.relation; c != 0) {
            return c;
        }
        return a.tail <=> b.tail;
    }

    /// "(head, relation, tail)" using raw forms.
    [[nodiscard]] std::string display() const;
};

struct FactHash {
    std::size_t operator()(const Fact& f) const noexcept;
};

/// Set of terms deduplicated under normalization; iterates in normalized order.
/// The first raw spelling inserted for a key wins.
class TermSet {
  public:
    TermSet() = default;

    bool insert(const Term& term);
    void insert_all(const TermSet& other);
    [[nodiscard]] bool contains(const Term& term) const { return terms_.contains(term.normalized); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::vector<Term> items() const;
    [[nodiscard]] std::vector<std::string> raw_forms() const;

    /// True when every element of `other` is in this set.
    [[nodiscard]] bool includes(const TermSet& other) const;

    friend bool operator==(const TermSet& a, const TermSet& b);

  private:
    std::map<std::string, Term> terms_;
};

struct Schema {
    TermSet entities;
    TermSet relations;

    friend bool operator==(const Schema&, const Schema&) = default;
};

/// A set of facts. Iteration follows first-insertion order so reports list
/// facts the way the extractor emitted them; equality is set equality.
class KnowledgeGraph {
  public:
    KnowledgeGraph() = default;
    KnowledgeGraph(std::initializer_list<Fact> facts);

    /// Returns false when an equal fact is already present.
    bool insert(const Fact& fact);

    [[nodiscard]] bool contains(const Fact& fact) const { return index_.contains(fact); }
    [[nodiscard]] std::size_t size() const noexcept { return facts_.size(); }
    [[nodiscard]] bool empty() const noexcept { return facts_.empty(); }
    [[nodiscard]] std::span<const Fact> facts() const noexcept { return facts_; }
    [[nodiscard]] auto begin() const noexcept { return facts_.begin(); }
    [[nodiscard]] auto end() const noexcept { return facts_.end(); }

    /// Heads and tails, recomputed from the facts on every call.
    [[nodiscard]] TermSet entities() const;
    [[nodiscard]] TermSet relations() const;

    /// Facts sorted by normalized triple.
    [[nodiscard]] std::vector<Fact> sorted() const;

    friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);

  private:
    std::vector<Fact> facts_;
    std::unordered_set<Fact, FactHash> index_;
};

bool kg_contains(const KnowledgeGraph& kg, const Fact& fact);
KnowledgeGraph kg_union(std::span<const KnowledgeGraph> kgs);

/// Keeps facts whose head and tail are schema entities and whose relation is a
/// schema relation.
KnowledgeGraph restrict_kg(const KnowledgeGraph& kg, const Schema& schema);

Schema schema_of(const KnowledgeGraph& kg);

// JSON: Term as its raw string, Fact as ["head","relation","tail"], KG as an
// array of facts, Schema as {"entities": [...], "relations": [...]}.
// Normalized forms are never stored; they are recomputed on load.
void to_json(nlohmann::json& j, const Term& t);
void from_json(const nlohmann::json& j, Term& t);
void to_json(nlohmann::json& j, const Fact& f);
void from_json(const nlohmann::json& j, Fact& f);
void to_json(nlohmann::json& j, const KnowledgeGraph& kg);
void from_json(const nlohmann::json& j, KnowledgeGraph& kg);
void to_json(nlohmann::json& j, const TermSet& s);
void from_json(const nlohmann::json& j, TermSet& s);
void to_json(nlohmann::json& j, const Schema& s);
void from_json(const nlohmann::json& j, Schema& s);

} // namespace fsc
