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

#include "fsc/error.hpp"
#include "fsc/parsers.hpp"

using namespace fsc;

TEST_CASE("yes/no verdicts") {
    CHECK(parse_yes_no("Yes") == YesNoVerdict::yes);
    CHECK(parse_yes_no("yes, it is supported.") == YesNoVerdict::yes);
    CHECK(parse_yes_no("NO.") == YesNoVerdict::no);
    CHECK(parse_yes_no("Answer: no") == YesNoVerdict::no);
    CHECK(parse_yes_no("I am not sure.") == YesNoVerdict::invalid);
    CHECK(parse_yes_no("yes and no") == YesNoVerdict::invalid);
    CHECK(parse_yes_no("") == YesNoVerdict::invalid);
    CHECK(parse_yes_no("yesterday nobody came") == YesNoVerdict::invalid);
    CHECK(parse_yes_no("Noé") == YesNoVerdict::invalid);
}

TEST_CASE("word tokens lowercase ASCII and keep non-ASCII bytes") {
    const auto t = word_tokens("Yes, Žan-Luc 42!");
    CHECK(t == std::set<std::string>{"yes", "Žan", "luc", "42"});
}

TEST_CASE("csv records") {
    CHECK(split_csv_record("a, b ,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_record(R"("x, y",r,"say ""hi""")") == std::vector<std::string>{"x, y", "r", "say \"hi\""});
    CHECK(split_csv_record("a,b,") == std::vector<std::string>{"a", "b", ""});
    CHECK_FALSE(split_csv_record(R"("open,b,c)").has_value());
    CHECK_FALSE(split_csv_record(R"("a"x,b,c)").has_value());
}

TEST_CASE("triples skip fences and malformed lines") {
    const auto p = parse_triples("```\nMarta Kovač,born in,Split\nnot a triple\n\"a,b\",r,t\n,r,t\n\n```\n");
    REQUIRE(p.facts.size() == 2);
    CHECK(p.facts[0] == Fact::make("marta kovač", "BORN IN", "split"));
    CHECK(p.facts[1].head.raw == "a,b");
    CHECK(p.skipped_lines == 4);
}

TEST_CASE("triples handle CRLF and four-field lines") {
    const auto p = parse_triples("a,r,b\r\nx,y,z,w\r\n");
    CHECK(p.facts.size() == 1);
    CHECK(p.skipped_lines == 1);
}

TEST_CASE("csv output parses back") {
    const std::vector<Fact> facts = {Fact::make("a \"q\"", "r, s", " t  u ")};
    const auto csv = facts_to_csv(facts);
    CHECK(csv == "\"a \"\"q\"\"\",\"r, s\",\"t u\"\n");
    const auto p = parse_triples(csv);
    REQUIRE(p.facts.size() == 1);
    CHECK(p.facts[0] == facts[0]);
    CHECK(p.facts[0].tail.raw == "t u");
}

TEST_CASE("csv_field quotes only when needed") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("") == "\"\"");
    CHECK(csv_field(" x") == "\" x\"");
}

TEST_CASE("json lists") {
    const auto terms = parse_json_list("Here you go:\n```json\n[\"Marta\", \"marta\", \" \", \"Split\"]\n```", ListKind::entities);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].raw == "Marta");
    CHECK(terms[1].normalized == "split");

    // the first array of strings wins; nested or numeric arrays are skipped
    const auto rel = parse_json_list("[1, 2] then [\"born in\", \"x]y\"]", ListKind::relations);
    REQUIRE(rel.size() == 2);
    CHECK(rel[1].raw == "x]y");

    CHECK(parse_json_list("[]", ListKind::entities).empty());
    try {
        (void)parse_json_list("no list here", ListKind::relations);
        FAIL("expected NoJsonArrayFound");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoJsonArrayFound);
    }
    CHECK_THROWS_AS((void)parse_json_list("[\"unterminated", ListKind::entities), Error);
}
