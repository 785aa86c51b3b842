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

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>

#include <json.hpp>

#include "fsc/config.hpp"
#include "fsc/extraction.hpp"
#include "fsc/llm.hpp"
#include "fsc/prompts.hpp"

namespace fsc {

/// Client, cache and prompts for one command invocation.
struct Runtime {
    std::shared_ptr<ResponseCache> cache;
    std::unique_ptr<LlmClient> client;
    PromptLibrary prompts;
    GenerationParams detection;
    GenerationParams correction;
    GenerationParams judge;
    std::size_t max_parallel = 8;

    [[nodiscard]] PipelineContext context(const GenerationParams& params) {
        return PipelineContext{*client, prompts, params, max_parallel};
    }
};

/// Backend precedence: `backend` if given, then the replay session, then HTTP.
Runtime make_runtime(const RunConfig& config, std::shared_ptr<LlmBackend> backend = nullptr);

/// Writes the session file when config.record_path is set.
void finish_runtime(const Runtime& runtime, const RunConfig& config);

/// Stable file stem for an instance id.
std::string safe_filename(std::string_view id);

/// Pretty JSON plus trailing newline; parent directories are created.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, std::string_view text);
nlohmann::json read_json(const std::filesystem::path& path);

/// out_dir/{reports,extractions}/<id>.json, summary.json, failures.json.
/// Returns 0 when every instance succeeded.
int cmd_detect(const RunConfig& config, const std::filesystem::path& dataset, std::ostream& log,
               std::shared_ptr<LlmBackend> backend = nullptr);

/// out_dir/metrics.json and metrics.csv from the reports in `reports_dir`.
int cmd_evaluate(const RunConfig& config, const std::filesystem::path& dataset, const std::filesystem::path& reports_dir,
                 std::ostream& log, std::shared_ptr<LlmBackend> backend = nullptr);

/// out_dir/sweep.csv and sweep.json for n = 1..min(sweep_max, samples).
int cmd_sweep(const RunConfig& config, const std::filesystem::path& dataset,
              const std::filesystem::path& extractions_dir, std::ostream& log,
              std::shared_ptr<LlmBackend> backend = nullptr);

/// out_dir/correction/<mode>.json, correction_report.json, correction_table.txt.
/// The baseline always runs since the other modes are measured against it.
int cmd_correct(const RunConfig& config, const std::filesystem::path& dataset, const std::filesystem::path& reports_dir,
                std::ostream& log, std::shared_ptr<LlmBackend> backend = nullptr);

/// DOT for one instance to `output`, or to `out` when output is empty.
int cmd_export_dot(const RunConfig& config, const std::filesystem::path& report,
                   const std::filesystem::path& extraction, const std::filesystem::path& output, std::ostream& out);

/// Copies every verified cache record into a session file.
int cmd_record_session(const RunConfig& config, const std::filesystem::path& output, std::ostream& log);

} // namespace fsc
