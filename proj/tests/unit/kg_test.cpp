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


#include <doctest.h>

#include <json.hpp>

#include "fsc/error.hpp"
#include "fsc/kg.hpp"
#include "oracles.hpp"

using namespace fsc;

TEST_CASE("canonicalize folds case and collapses whitespace") {
    CHECK(canonicalize("  Born\t  IN \n") == "born in");
    CHECK(canonicalize("ŽELJEZNIČAR") == "željezničar");
    CHECK(canonicalize("Straße") == canonicalize("STRASSE"));
    CHECK(canonicalize("a b") == "a b");
    CHECK(canonicalize("") == "");
    CHECK(canonicalize(" \t\n") == "");
}

TEST_CASE("collapse_whitespace keeps case") {
    CHECK(collapse_whitespace("  Marta \n Kovač ") == "Marta Kovač");
    CHECK(collapse_whitespace("x") == "x");
}

TEST_CASE("invalid UTF-8 is replaced, not rejected") {
    const auto s = canonicalize("a\xff" "b");
    CHECK(s == "a\xEF\xBF\xBD" "b");
}

TEST_CASE("normalize_term rejects empty terms") {
    try {
        (void)normalize_term("   ");
        FAIL("expected EmptyTerm");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyTerm);
    }
    const auto t = normalize_term(" Oslo ");
    CHECK(t.raw == " Oslo ");
    CHECK(t.normalized == "oslo");
}

TEST_CASE("facts compare by normalized form and display raw forms") {
    const auto a = Fact::make("Marta Kovač", "born in", "Split");
    const auto b = Fact::make("MARTA  KOVAČ", "Born In", "split");
    CHECK(a == b);
    CHECK(FactHash{}(a) == FactHash{}(b));
    CHECK(a.display() == "(Marta Kovač, born in, Split)");
    CHECK(Fact::make("a", "r", "b") < Fact::make("a", "r", "c"));
}

TEST_CASE("knowledge graph deduplicates and keeps first spelling") {
    KnowledgeGraph kg;
    CHECK(kg.insert(Fact::make("Ana", "born in", "Oslo")));
    CHECK_FALSE(kg.insert(Fact::make("ana", "BORN IN", "oslo")));
    CHECK(kg.insert(Fact::make("Ana", "plays for", "Lima")));
    CHECK(kg.size() == 2);
    CHECK(kg.facts()[0].head.raw == "Ana");
    CHECK(kg.contains(Fact::make("ANA", "born in", "OSLO")));
    CHECK(kg_contains(kg, Fact::make("ana", "plays for", "lima")));
    CHECK(kg.entities().size() == 3);
    CHECK(kg.relations().size() == 2);
    const auto sorted = kg.sorted();
    CHECK(sorted[0].relation.normalized == "born in");
}

TEST_CASE("graph equality ignores insertion order") {
    const KnowledgeGraph a{Fact::make("a", "r", "b"), Fact::make("c", "r", "d")};
    const KnowledgeGraph b{Fact::make("C", "R", "D"), Fact::make("A", "R", "B")};
    CHECK(a == b);
    const KnowledgeGraph c{Fact::make("a", "r", "b")};
    CHECK_FALSE(a == c);
}

TEST_CASE("union and restriction") {
    const std::vector<KnowledgeGraph> kgs = {KnowledgeGraph{Fact::make("a", "r", "b")},
                                             KnowledgeGraph{Fact::make("A", "r", "B"), Fact::make("b", "s", "c")}};
    const auto u = kg_union(kgs);
    CHECK(u.size() == 2);

    Schema schema;
    schema.entities.insert(normalize_term("A"));
    schema.entities.insert(normalize_term("b"));
    schema.relations.insert(normalize_term("R"));
    const auto r = restrict_kg(u, schema);
    CHECK(r.size() == 1);
    CHECK(r.contains(Fact::make("a", "r", "b")));

    const auto s = schema_of(u);
    CHECK(s.entities.size() == 3);
    CHECK(s.relations.size() == 2);
    CHECK(restrict_kg(u, s) == u);
}

TEST_CASE("restriction matches a brute-force filter") {
    fsc::testing::Gen g(17);
    const std::vector<std::string> ents = {"ana", "ben", "oslo", "lima"};
    const std::vector<std::string> rels = {"born in", "plays for", "likes"};
    for (int tc = 0; tc < 200; ++tc) {
        std::set<std::string> e;
        std::set<std::string> r;
        Schema schema;
        for (const auto& x : ents) {
            if (g.coin(0.5)) {
                e.insert(x);
                schema.entities.insert(normalize_term(g.recase(x)));
            }
        }
        for (const auto& x : rels) {
            if (g.coin(0.5)) {
                r.insert(x);
                schema.relations.insert(normalize_term(g.recase(x)));
            }
        }
        std::vector<fsc::testing::StrTriple> triples;
        KnowledgeGraph kg;
        for (int i = 0; i < g.uniform(0, 10); ++i) {
            fsc::testing::StrTriple t{g.recase(g.pick(ents)), g.recase(g.pick(rels)), g.recase(g.pick(ents))};
            triples.push_back(t);
            kg.insert(Fact::make(t[0], t[1], t[2]));
        }
        CHECK(restrict_kg(kg, schema).size() == fsc::testing::brute_restricted_size(triples, e, r));
    }
}

TEST_CASE("term sets") {
    TermSet a;
    CHECK(a.insert(normalize_term("Oslo")));
    CHECK_FALSE(a.insert(normalize_term("OSLO")));
    TermSet b;
    b.insert(normalize_term("oslo"));
    b.insert(normalize_term("Lima"));
    CHECK(b.includes(a));
    CHECK_FALSE(a.includes(b));
    a.insert_all(b);
    CHECK(a == b);
    CHECK(a.raw_forms() == std::vector<std::string>{"Lima", "Oslo"});
}

TEST_CASE("json round trip") {
    const KnowledgeGraph kg{Fact::make("Ana", "born in", "Oslo"), Fact::make("Ana", "plays for", "FK Lima")};
    const nlohmann::json j = kg;
    CHECK(j.dump() == R"([["Ana","born in","Oslo"],["Ana","plays for","FK Lima"]])");
    const auto back = j.get<KnowledgeGraph>();
    CHECK(back == kg);
    CHECK(back.facts()[1].tail.raw == "FK Lima");

    const nlohmann::json sj = schema_of(kg);
    CHECK(sj.get<Schema>() == schema_of(kg));

    CHECK_THROWS(nlohmann::json::array({"a", "b"}).get<Fact>());
}
