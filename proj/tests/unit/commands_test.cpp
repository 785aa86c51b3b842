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
#include "fsc/commands.hpp"
#include "fsc/error.hpp"
#include "fsc/scoring.hpp"

using namespace fsc;
using namespace fsc::testing;
namespace fs = std::filesystem;

namespace {

class Workspace {
  public:
    explicit Workspace(const std::string& name)
        : root_(fs::temp_directory_path() / ("fsc-cmd-" + std::to_string(::getpid()) + "-" + name)) {
        fs::remove_all(root_);
        fs::create_directories(root_);
        write_json(dataset(), dataset_json(world));
    }
    ~Workspace() { fs::remove_all(root_); }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    [[nodiscard]] fs::path dataset() const { return root_ / "dataset.json"; }
    [[nodiscard]] fs::path out() const { return root_ / "out"; }
    [[nodiscard]] const fs::path& root() const { return root_; }

    RunConfig config(ScorerKind scorer = ScorerKind::llm_kg) const {
        RunConfig c;
        c.scorer = scorer;
        c.quiet = true;
        c.out_dir = out();
        return c;
    }

    World world = fixture_world();
    std::shared_ptr<FakeWorldBackend> backend = std::make_shared<FakeWorldBackend>(world);

  private:
    fs::path root_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("safe file names") {
    CHECK(safe_filename("bio-001") == "bio-001");
    CHECK(safe_filename("a/b c") == "a_b_c");
    CHECK(safe_filename("..") == "_..");
    CHECK(safe_filename("") == "_");
}

TEST_CASE("json helpers") {
    Workspace w("json");
    const auto p = w.root() / "nested" / "x.json";
    write_json(p, {{"a", 1}});
    CHECK(slurp(p) == "{\n  \"a\": 1\n}\n");
    CHECK(read_json(p)["a"] == 1);
    write_text(w.root() / "bad.json", "{");
    CHECK_THROWS_AS(read_json(w.root() / "bad.json"), Error);
    CHECK_THROWS_AS(read_json(w.root() / "missing.json"), Error);
}

TEST_CASE("detect writes per-instance artifacts and a summary") {
    Workspace w("detect");
    std::ostringstream log;
    CHECK(cmd_detect(w.config(), w.dataset(), log, w.backend) == 0);
    for (const auto* id : {"bio-001", "bio-002", "bio-003"}) {
        CHECK(fs::is_regular_file(w.out() / "extractions" / (std::string(id) + ".json")));
        CHECK(fs::is_regular_file(w.out() / "reports" / (std::string(id) + ".json")));
    }
    const auto summary = read_json(w.out() / "summary.json");
    CHECK(summary["prompt_version"] == "v1");
    CHECK(summary["config"]["scorer"] == "llm_kg");
    CHECK(read_json(w.out() / "failures.json").empty());

    const auto report = report_from_json(read_json(w.out() / "reports" / "bio-001.json"));
    CHECK(report.sentences.size() == 3);
    CHECK(report.n_samples == 4);
}

TEST_CASE("detect then evaluate, sweep, correct and export") {
    Workspace w("pipeline");
    std::ostringstream log;
    auto config = w.config();
    REQUIRE(cmd_detect(config, w.dataset(), log, w.backend) == 0);
    config.fact_level = true;
    CHECK(cmd_evaluate(config, w.dataset(), w.out() / "reports", log, w.backend) == 0);
    const auto metrics = read_json(w.out() / "metrics.json");
    CHECK(metrics["sentence"]["n"] == 9);
    CHECK(metrics.contains("fact"));
    CHECK(metrics.contains("random_baseline"));
    CHECK(fs::is_regular_file(w.out() / "metrics.csv"));

    config.scorer = ScorerKind::frequency;
    CHECK(cmd_sweep(config, w.dataset(), w.out() / "extractions", log) == 0);
    const auto sweep = read_json(w.out() / "sweep.json");
    CHECK(sweep.size() == 4);

    config.scorer = ScorerKind::llm_kg;
    CHECK(cmd_correct(config, w.dataset(), w.out() / "reports", log, w.backend) == 0);
    for (const auto* mode : {"baseline", "sentence", "fact"}) {
        CHECK(fs::is_regular_file(w.out() / "correction" / (std::string(mode) + ".json")));
    }
    const auto table = slurp(w.out() / "correction_table.txt");
    CHECK(table.find("baseline") != std::string::npos);

    std::ostringstream dot;
    CHECK(cmd_export_dot(config, w.out() / "reports" / "bio-001.json", w.out() / "extractions" / "bio-001.json", {},
                         dot) == 0);
    CHECK(dot.str().rfind("digraph \"bio-001\" {", 0) == 0);
    try {
        (void)cmd_export_dot(config, w.out() / "reports" / "bio-001.json", w.out() / "extractions" / "bio-002.json",
                             {}, dot);
        FAIL("expected IdMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IdMismatch);
    }
}

TEST_CASE("evaluate refuses misaligned report sets") {
    Workspace w("align");
    std::ostringstream log;
    auto config = w.config(ScorerKind::frequency);
    REQUIRE(cmd_detect(config, w.dataset(), log, w.backend) == 0);
    fs::remove(w.out() / "reports" / "bio-002.json");
    try {
        (void)cmd_evaluate(config, w.dataset(), w.out() / "reports", log);
        FAIL("expected IdMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IdMismatch);
    }
}

TEST_CASE("correct needs reports for guided modes") {
    Workspace w("noreports");
    std::ostringstream log;
    try {
        (void)cmd_correct(w.config(), w.dataset(), w.out() / "reports", log, w.backend);
        FAIL("expected Io");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
    fs::create_directories(w.out() / "reports");
    try {
        (void)cmd_correct(w.config(), w.dataset(), w.out() / "reports", log, w.backend);
        FAIL("expected Precondition");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Precondition);
    }
    auto config = w.config();
    config.modes = {CorrectionMode::baseline};
    CHECK(cmd_correct(config, w.dataset(), w.out() / "reports", log, w.backend) == 0);
}

TEST_CASE("invalid config stops before any call") {
    Workspace w("badconfig");
    auto config = w.config();
    config.detection_temperature = 3.0;
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_detect(config, w.dataset(), log, w.backend), Error);
    CHECK(w.backend->calls() == 0);
    CHECK_FALSE(fs::exists(w.out()));
}

TEST_CASE("per-instance failures are reported, not fatal") {
    Workspace w("failures");
    std::ostringstream log;
    auto config = w.config();
    config.call_budget = 5;
    CHECK(cmd_detect(config, w.dataset(), log, w.backend) == 1);
    const auto failures = read_json(w.out() / "failures.json");
    CHECK(failures.size() == 3);
}

TEST_CASE("record flag and cache export produce replayable sessions") {
    Workspace w("record");
    std::ostringstream log;
    auto config = w.config(ScorerKind::llm_text);
    config.record_path = w.root() / "rec.jsonl";
    config.cache_path = w.root() / "cache.jsonl";
    REQUIRE(cmd_detect(config, w.dataset(), log, w.backend) == 0);
    REQUIRE(fs::is_regular_file(config.record_path));

    CHECK(cmd_record_session(config, w.root() / "exported.jsonl", log) == 0);
    CHECK(slurp(w.root() / "exported.jsonl").size() > 0);

    for (const auto& session : {config.record_path, w.root() / "exported.jsonl"}) {
        auto replay = w.config(ScorerKind::llm_text);
        replay.replay_path = session;
        replay.out_dir = w.root() / ("replay-" + session.stem().string());
        CHECK(cmd_detect(replay, w.dataset(), log) == 0);
        CHECK(slurp(replay.out_dir / "reports" / "bio-003.json") == slurp(w.out() / "reports" / "bio-003.json"));
    }

    auto no_cache = w.config();
    CHECK_THROWS_AS(cmd_record_session(no_cache, w.root() / "x.jsonl", log), Error);
}
