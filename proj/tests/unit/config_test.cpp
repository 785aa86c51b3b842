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

#include <cstring>
#include <filesystem>
#include <fstream>

#include "fsc/config.hpp"
#include "fsc/error.hpp"

using namespace fsc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("fsc-config-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

} // namespace

TEST_CASE("defaults validate") {
    const RunConfig c;
    CHECK_NOTHROW(validate_config(c));
    CHECK(c.scorer == ScorerKind::llm_text);
    CHECK(c.correction_temperature == 0.5);
    CHECK(c.detection_temperature == 0.0);
    CHECK(c.modes.size() == 3);
}

TEST_CASE("settings parse typed values") {
    RunConfig c;
    apply_setting(c, "n_samples", "5");
    apply_setting(c, "scorer", " llm_kg ");
    apply_setting(c, "fact-level", "yes");
    apply_setting(c, "modes", "fact, baseline,fact");
    apply_setting(c, "call-budget", "100");
    apply_setting(c, "model", "local");
    apply_setting(c, "timeout", "7");
    CHECK(c.n_samples == 5u);
    CHECK(c.scorer == ScorerKind::llm_kg);
    CHECK(c.fact_level);
    CHECK(c.modes == std::vector<CorrectionMode>{CorrectionMode::baseline, CorrectionMode::fact});
    CHECK(c.call_budget == 100u);
    CHECK(c.judge_model == "local");
    CHECK(c.timeout == std::chrono::seconds(7));
    apply_setting(c, "n-samples", "all");
    apply_setting(c, "call-budget", "none");
    CHECK_FALSE(c.n_samples.has_value());
    CHECK_FALSE(c.call_budget.has_value());
}

TEST_CASE("bad settings are config errors") {
    RunConfig c;
    CHECK(code_of([&] { apply_setting(c, "seed", "1.5"); }) == ErrorCode::Config);
    CHECK(code_of([&] { apply_setting(c, "fact-threshold", "high"); }) == ErrorCode::Config);
    CHECK(code_of([&] { apply_setting(c, "scorer", "oracle"); }) == ErrorCode::Config);
    CHECK(code_of([&] { apply_setting(c, "modes", ","); }) == ErrorCode::Config);
    CHECK(code_of([&] { apply_setting(c, "quiet", "maybe"); }) == ErrorCode::Config);
    CHECK(code_of([&] { apply_setting(c, "colour", "red"); }) == ErrorCode::Config);
    CHECK(code_of([&] { apply_setting(c, "api_key", "sk-123"); }) == ErrorCode::Config);
}

TEST_CASE("every advertised key is settable") {
    for (const auto& key : config_keys()) {
        CHECK(key.find('_') == std::string::npos);
    }
    CHECK(std::find(config_keys().begin(), config_keys().end(), "api-key") == config_keys().end());
}

TEST_CASE("validation ranges") {
    RunConfig c;
    c.correction_temperature = 2.5;
    CHECK(code_of([&] { validate_config(c); }) == ErrorCode::Config);
    c = RunConfig{};
    c.fact_threshold = -0.1;
    CHECK(code_of([&] { validate_config(c); }) == ErrorCode::Config);
    c = RunConfig{};
    c.n_samples = 0;
    CHECK(code_of([&] { validate_config(c); }) == ErrorCode::Config);
    c = RunConfig{};
    c.endpoint = "ftp://host/x";
    CHECK(code_of([&] { validate_config(c); }) == ErrorCode::Config);
    c = RunConfig{};
    c.replay_path = scratch("absent.jsonl");
    CHECK(code_of([&] { validate_config(c); }) == ErrorCode::Config);
    c = RunConfig{};
    c.prompts_dir = scratch("absent-dir");
    CHECK(code_of([&] { validate_config(c); }) == ErrorCode::Config);
}

TEST_CASE("config files") {
    const auto path = scratch("run.conf");
    std::ofstream(path) << "# comment\nscorer = frequency   # trailing\n\nseed=42\nn_samples = 3\n";
    RunConfig c;
    apply_config_file(c, path);
    CHECK(c.scorer == ScorerKind::frequency);
    CHECK(c.seed == 42);
    CHECK(c.n_samples == 3u);

    std::ofstream(path) << "scorer = frequency\nseed\n";
    try {
        apply_config_file(c, path);
        FAIL("expected Config");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("run.conf:2") != std::string::npos);
    }
    std::ofstream(path) << "seed = x\n";
    CHECK(code_of([&] { apply_config_file(c, path); }) == ErrorCode::Config);
    CHECK(code_of([&] { apply_config_file(c, scratch("none.conf")); }) == ErrorCode::Config);
    fs::remove_all(path.parent_path());
}

TEST_CASE("precedence: defaults, file, flags, environment") {
    const auto path = scratch("p.conf");
    std::ofstream(path) << "scorer = llm_kg\nseed = 1\nmax-tokens = 99\n";
    RunConfig c;
    apply_config_file(c, path);
    apply_setting(c, "seed", "2");
    apply_environment(c, [](const char* name) -> const char* {
        if (std::strcmp(name, "OPENAI_API_KEY") == 0) {
            return "sk-openai";
        }
        return nullptr;
    });
    CHECK(c.scorer == ScorerKind::llm_kg);
    CHECK(c.seed == 2);
    CHECK(c.max_tokens == 99);
    CHECK(c.api_key == "sk-openai");

    apply_environment(c, [](const char* name) -> const char* {
        return std::strcmp(name, "FSC_API_KEY") == 0 ? "sk-fsc" : "sk-openai";
    });
    CHECK(c.api_key == "sk-fsc");
    fs::remove_all(path.parent_path());
}

TEST_CASE("config json omits secrets") {
    RunConfig c;
    c.api_key = "sk-secret";
    const auto j = config_to_json(c);
    CHECK(j.dump().find("sk-secret") == std::string::npos);
    CHECK(j["scorer"] == "llm_text");
    CHECK(j["n_samples"].is_null());
}
