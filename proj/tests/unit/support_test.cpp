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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fake_world.hpp"
#include "oracles.hpp"
#include "reverse_template.hpp"

using namespace fsc;
using namespace fsc::testing;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("unrender inverts render") {
    const std::string tmpl = "Fact: {input}\nGraph:\n{knowledge_graph}\nAnswer {{yes}} or no.";
    const PromptTemplate t(tmpl);
    const PromptVars vars = {{"input", "(a, r, b)"}, {"knowledge_graph", "a,r,b\nc,r,d"}};
    const auto back = unrender(tmpl, t.render(vars));
    REQUIRE(back);
    CHECK(*back == vars);
    CHECK_FALSE(unrender(tmpl, "something else"));
}

TEST_CASE("unrender anchors the final literal and checks repeats") {
    const std::string tmpl = "{a} and {b}\n";
    const auto v = unrender(tmpl, "x and y\nz\n");
    REQUIRE(v);
    CHECK(v->at("b") == "y\nz");
    CHECK(unrender("{a}-{a}", "q-q"));
    CHECK_FALSE(unrender("{a}-{a}", "q-r"));
}

TEST_CASE("every builtin prompt round trips") {
    const auto& lib = PromptLibrary::builtin();
    for (const auto id : kAllPrompts) {
        PromptVars vars;
        for (const auto& name : required_placeholders(id)) {
            vars[name] = "<" + name + " value>";
        }
        const auto back = unrender(lib.get(id).text(), lib.render(id, vars));
        REQUIRE(back);
        CHECK(*back == vars);
    }
}

TEST_CASE("oracle sanity") {
    CHECK(brute_average_precision({0.1, 0.4, 0.35, 0.8}, {false, false, true, true}) ==
          doctest::Approx(5.0 / 6.0));
    CHECK(brute_mean_ranks({2, 1, 2}) == std::vector<double>{2.5, 1, 2.5});
    CHECK(brute_presence_count({"A", "r", "b"}, {{{"a", "R", "B"}, {"a", "r", "b"}}, {}, {{"a", "r", "c"}}}) == 1);
    CHECK(brute_restricted_size({{"a", "r", "b"}, {"A", "R", "B"}, {"a", "s", "b"}}, {"a", "b"}, {"r"}) == 1);
}

TEST_CASE("committed fixtures are reproducible") {
    const fs::path committed = FSC_FIXTURE_DIR;
    const auto fresh = fs::temp_directory_path() / ("fsc-regen-" + std::to_string(::getpid()));
    fs::remove_all(fresh);
    generate_fixtures(fresh);
    for (const auto* name : {"dataset.json", "session.jsonl"}) {
        INFO(name);
        CHECK(slurp(fresh / name) == slurp(committed / name));
    }
    fs::remove_all(fresh);
}
