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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fsc/correction.hpp"
#include "fsc/evaluation.hpp"
#include "fsc/scoring.hpp"

namespace fsc {

struct RunConfig {
    std::string endpoint = "http://localhost:8000/v1/chat/completions";
    std::string api_key;
    std::string detection_model = "meta-llama/Llama-3.1-70B-Instruct";
    std::string correction_model = "gpt-4o";
    std::string judge_model = "gpt-4o";
    double detection_temperature = kDetectionTemperature;
    double correction_temperature = kCorrectionTemperature;
    double judge_temperature = kDetectionTemperature;
    int max_tokens = 1024;
    std::int64_t seed = 0;

    std::optional<std::size_t> n_samples;
    std::size_t sweep_max = 20;
    ScorerKind scorer = ScorerKind::llm_text;
    Aggregation aggregation = Aggregation::mean;
    MissingScorePolicy missing_policy = MissingScorePolicy::exclude;
    bool fact_level = false;

    double fact_threshold = kFactThreshold;
    double sentence_threshold = kFactThreshold;
    double dot_threshold = kGraphFactThreshold;
    std::vector<CorrectionMode> modes = {CorrectionMode::baseline, CorrectionMode::sentence, CorrectionMode::fact};

    std::filesystem::path prompts_dir;
    std::filesystem::path cache_path;
    std::filesystem::path replay_path;
    std::filesystem::path record_path;
    std::filesystem::path out_dir = "out";

    std::size_t max_in_flight = 8;
    std::optional<std::size_t> call_budget;
    int max_retries = 3;
    std::chrono::seconds timeout{120};
    bool quiet = false;
};

/// Every key accepted by apply_setting, in kebab case.
const std::vector<std::string>& config_keys();

/// Sets one field from its textual form. Keys accept '-' or '_'.
/// Throws Error(Config) on an unknown key or a bad value.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// "key = value" lines; '#' starts a comment; blank lines are ignored.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// FSC_API_KEY, then OPENAI_API_KEY. `getenv` is injectable for tests.
void apply_environment(RunConfig& config,
                       const std::function<const char*(const char*)>& getenv = [](const char* k) { return std::getenv(k); });

/// Range checks and path existence. Throws Error(Config).
void validate_config(const RunConfig& config);

nlohmann::json config_to_json(const RunConfig& config);

} // namespace fsc
