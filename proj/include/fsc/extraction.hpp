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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fsc/dataset.hpp"
#include "fsc/error.hpp"
#include "fsc/kg.hpp"
#include "fsc/llm.hpp"
#include "fsc/prompts.hpp"

namespace fsc {

enum class ExtractionStage { entities, relations, sentence_kg, sample_kg };

std::string_view to_string(ExtractionStage stage) noexcept;

class ExtractionError : public Error {
  public:
    ExtractionError(ExtractionStage stage, const std::string& message)
        : Error(ErrorCode::ExtractionFailed, "stage=" + std::string(to_string(stage)) + ": " + message),
          stage_(stage) {}

    [[nodiscard]] ExtractionStage stage() const noexcept { return stage_; }

  private:
    ExtractionStage stage_;
};

/// Shared handles for one pipeline run.
struct PipelineContext {
    LlmClient& llm;
    const PromptLibrary& prompts = PromptLibrary::builtin();
    GenerationParams params{};
    std::size_t max_parallel = 8;
};

struct ExtractionDiagnostics {
    std::size_t skipped_sentence_lines = 0;
    std::size_t skipped_sample_lines = 0;
    /// Sentence facts using terms outside (entities, relations) of the passage.
    std::size_t out_of_schema_sentence_facts = 0;
    /// Sample facts using terms outside the sample schema. Kept, not dropped.
    std::size_t out_of_schema_sample_facts = 0;

    friend bool operator==(const ExtractionDiagnostics&, const ExtractionDiagnostics&) = default;
};

/// Everything extracted for one instance. passage_kg is the union of
/// sentence_kgs; sample_schema extends passage_schema with every term the
/// sentence KGs used.
struct PassageExtraction {
    std::string id;
    std::string passage;
    std::vector<std::string> sentences;
    std::vector<std::string> samples;
    Schema passage_schema;
    std::vector<KnowledgeGraph> sentence_kgs;
    KnowledgeGraph passage_kg;
    Schema sample_schema;
    std::vector<KnowledgeGraph> sample_kgs;
    ExtractionDiagnostics diagnostics;
};

struct KgExtraction {
    KnowledgeGraph kg;
    std::size_t skipped_lines = 0;
    std::size_t out_of_schema = 0;
};

/// JSON array instruction appended to the entity and relation prompts.
std::string_view json_list_format_instructions();

/// A term set rendered as a JSON array of raw spellings.
std::string render_term_list(const TermSet& terms);

TermSet extract_entities(std::string_view passage, PipelineContext& ctx);
TermSet extract_relations(std::string_view passage, const TermSet& entities, PipelineContext& ctx);

/// Facts are kept even when they use terms outside `schema`; the count of
/// such facts is reported.
KgExtraction extract_sentence_kg(std::string_view sentence, std::string_view passage, const Schema& schema,
                                 PipelineContext& ctx);

Schema build_sample_schema(const Schema& passage_schema, std::span<const KnowledgeGraph> sentence_kgs);

/// Reads only the sample text and the shared schema.
KgExtraction extract_sample_kg(std::string_view sample, const Schema& sample_schema, PipelineContext& ctx);

/// Entities, relations, per-sentence KGs (parallel), sample schema, per-sample
/// KGs (parallel). Any failing stage aborts with ExtractionError.
PassageExtraction extract_all(const DetectionInstance& instance, PipelineContext& ctx);

nlohmann::json extraction_to_json(const PassageExtraction& extraction);
PassageExtraction extraction_from_json(const nlohmann::json& j);

} // namespace fsc
