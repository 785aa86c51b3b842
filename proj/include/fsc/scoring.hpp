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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fsc/extraction.hpp"
#include "fsc/kg.hpp"
#include "fsc/parsers.hpp"

namespace fsc {

enum class ScorerKind { frequency, llm_kg, llm_text };
enum class Aggregation { mean, max };

std::string_view to_string(ScorerKind kind) noexcept;
std::string_view to_string(Aggregation agg) noexcept;
ScorerKind parse_scorer(std::string_view text);
Aggregation parse_aggregation(std::string_view text);

/// Hallucination score of one fact. Higher means less consistent with the
/// samples. `unsupported` counts samples that did not back the fact (absent
/// from the sample KG, or a "no" verdict); `valid_responses` is the
/// denominator actually used.
struct FactScore {
    Fact fact;
    std::optional<double> score;
    ScorerKind scorer = ScorerKind::frequency;
    std::size_t valid_responses = 0;
    std::size_t total_responses = 0;
    std::size_t unsupported = 0;
    std::size_t failed_calls = 0;

    friend bool operator==(const FactScore&, const FactScore&) = default;
};

/// 1 - (samples whose KG contains the fact) / (number of samples).
/// Throws Error(NoSamples) on an empty list.
double frequency_score(const Fact& fact, std::span<const KnowledgeGraph> sample_kgs);
FactScore frequency_fact_score(const Fact& fact, std::span<const KnowledgeGraph> sample_kgs);

/// Mean of the verdict mapping yes -> 0, no -> 1 over valid verdicts;
/// nullopt when none is valid.
std::optional<double> psi_average(std::span<const YesNoVerdict> verdicts);
FactScore fact_score_from_verdicts(const Fact& fact, ScorerKind scorer, std::span<const YesNoVerdict> verdicts,
                                   std::size_t failed_calls = 0);

/// One "head,relation,tail" line per fact, sorted by normalized triple.
std::string serialize_kg_for_prompt(const KnowledgeGraph& kg);

std::string kg_verdict_prompt(const PromptLibrary& prompts, const Fact& fact, const KnowledgeGraph& sample_kg);
std::string text_verdict_prompt(const PromptLibrary& prompts, const Fact& fact, std::string_view sample);

/// One verdict call per sample KG. A failed call counts as invalid.
FactScore llm_kg_score(const Fact& fact, std::span<const KnowledgeGraph> sample_kgs, PipelineContext& ctx);
/// One verdict call per sample text. A failed call counts as invalid.
FactScore llm_text_score(const Fact& fact, std::span<const std::string> samples, PipelineContext& ctx);

/// Mean or max over the present scores; nullopt when there are none.
std::optional<double> aggregate_sentence(std::span<const std::optional<double>> fact_scores, Aggregation agg);
/// Mean over the present sentence scores; nullopt when there are none.
std::optional<double> aggregate_passage(std::span<const std::optional<double>> sentence_scores);

/// Mean over samples of -|sample KG restricted to the schema|. Range (-inf, 0].
double kg_size_passage_score(std::span<const KnowledgeGraph> sample_kgs, const Schema& sample_schema);

struct SentenceScore {
    std::size_t index = 0;
    std::optional<double> score;
    std::vector<FactScore> facts;
};

struct ScoreDiagnostics {
    std::size_t invalid_verdicts = 0;
    std::size_t failed_calls = 0;
    std::size_t skipped_sentence_lines = 0;
    std::size_t skipped_sample_lines = 0;
    std::size_t out_of_schema_sample_facts = 0;
    /// First few distinct call failures, for the operator.
    std::vector<std::string> errors;
};

struct ScoreReport {
    std::string id;
    ScorerKind scorer = ScorerKind::frequency;
    Aggregation aggregation = Aggregation::mean;
    std::size_t n_samples = 0;
    std::vector<SentenceScore> sentences;
    std::optional<double> passage_score;
    /// Mean fact score over the passage KG, without sentence grouping.
    std::optional<double> passage_kg_fact_mean;
    double kg_size_score = 0.0;
    ScoreDiagnostics diagnostics;

    [[nodiscard]] std::vector<std::optional<double>> sentence_scores() const;
    /// Score of `fact` if it occurs in any sentence of the report.
    [[nodiscard]] std::optional<FactScore> find_fact(const Fact& fact) const;
};

struct ScoreOptions {
    ScorerKind scorer = ScorerKind::frequency;
    Aggregation aggregation = Aggregation::mean;
    /// Use only the first n samples; all when unset.
    std::optional<std::size_t> n_samples;
};

/// Scores every distinct passage fact once, then aggregates per sentence and
/// per passage. `ctx` may be null for the frequency scorer, which makes no
/// model calls.
ScoreReport score_instance(const PassageExtraction& extraction, const ScoreOptions& options, PipelineContext* ctx);

nlohmann::json report_to_json(const ScoreReport& report);
ScoreReport report_from_json(const nlohmann::json& j);

} // namespace fsc
