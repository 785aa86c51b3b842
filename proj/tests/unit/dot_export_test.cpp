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

#include "dot_grammar.hpp"
#include "fsc/dot_export.hpp"

using namespace fsc;
using namespace fsc::testing;

namespace {

struct Case {
    PassageExtraction extraction;
    ScoreReport report;
};

Case make_case(const std::vector<std::pair<Fact, std::optional<double>>>& facts) {
    Case c;
    c.extraction.id = "bio \"7\"";
    c.extraction.sentences = {"s"};
    KnowledgeGraph kg;
    SentenceScore s;
    for (const auto& [f, score] : facts) {
        kg.insert(f);
        FactScore fs;
        fs.fact = f;
        fs.score = score;
        s.facts.push_back(fs);
    }
    c.extraction.sentence_kgs = {kg};
    c.extraction.passage_kg = kg;
    c.report.id = c.extraction.id;
    c.report.sentences = {s};
    return c;
}

} // namespace

TEST_CASE("quoting") {
    CHECK(dot_quote("plain") == "\"plain\"");
    CHECK(dot_quote("a\"b\\c\nd\r") == "\"a\\\"b\\\\c\\nd\"");
}

TEST_CASE("empty graph is valid") {
    const auto c = make_case({});
    const auto dot = export_dot(c.report, c.extraction, 0.4);
    const auto p = parse_dot(dot);
    REQUIRE_MESSAGE(p.ok, p.error);
    CHECK(p.directed);
    CHECK(p.edges.empty());
}

TEST_CASE("edges carry score, width and colour") {
    const auto c = make_case({{Fact::make("Ana \"A\"", "born in", "Oslo"), 0.85},
                              {Fact::make("ana \"a\"", "plays for", "Lima\\FC"), 0.0},
                              {Fact::make("Oslo", "capital of", "Norway"), 0.4},
                              {Fact::make("Oslo", "twin of", "Lima\\FC"), std::nullopt}});
    const auto dot = export_dot(c.report, c.extraction, 0.4);
    const auto p = parse_dot(dot);
    REQUIRE_MESSAGE(p.ok, p.error);
    REQUIRE(p.edges.size() == 4);
    CHECK(p.nodes.size() == 4);

    const auto& red = p.edges[0];
    CHECK(red.attrs.at("color") == "red");
    CHECK(red.attrs.at("penwidth") == "5.10");
    CHECK(red.attrs.at("label") == "born in (0.85)");
    CHECK(red.from == p.edges[1].from);

    CHECK(p.edges[1].attrs.at("color") == "green");
    CHECK(p.edges[1].attrs.at("penwidth") == "0.10");
    // the threshold itself is not flagged
    CHECK(p.edges[2].attrs.at("color") == "green");
    CHECK(p.edges[2].attrs.at("penwidth") == "2.40");

    CHECK(p.edges[3].attrs.at("color") == "gray");
    CHECK(p.edges[3].attrs.at("style") == "dashed");
    CHECK(p.edges[3].attrs.at("label") == "twin of (n/a)");
}

TEST_CASE("graph grammar rejects malformed input") {
    CHECK_FALSE(parse_dot("digraph { a -- b }").ok);
    CHECK_FALSE(parse_dot("graph { a -> b }").ok);
    CHECK_FALSE(parse_dot("digraph { a -> }").ok);
    CHECK_FALSE(parse_dot("digraph { \"open }").ok);
    CHECK_FALSE(parse_dot("digraph { node -> b }").ok);
    CHECK(parse_dot("strict digraph g { // c\n a -> b [x=1]; /* d */ }").ok);
}
