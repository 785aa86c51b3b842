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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fsc/dataset.hpp"
#include "fsc/extraction.hpp"
#include "fsc/scoring.hpp"

namespace fsc {

/// Default operating points: fact-level flagging, graph colouring and
/// sentence-level flagging.
inline constexpr double kFactThreshold = 0.3;
inline constexpr double kGraphFactThreshold = 0.4;
inline constexpr double kSentenceThreshold = 0.75;

enum class CorrectionMode { baseline, sentence, fact };
enum class FlagLevel { sentence, fact };
enum class Judgment { factual, non_factual, refused, invalid };

std::string_view to_string(CorrectionMode mode) noexcept;
std::string_view to_string(Judgment judgment) noexcept;
CorrectionMode parse_mode(std::string_view text);

struct FlaggedFact {
    std::size_t sentence = 0;
    Fact fact;
    double score = 0.0;
};

struct FlaggedSet {
    std::vector<std::size_t> sentences;
    std::vector<FlaggedFact> facts;

    [[nodiscard]] bool empty() const noexcept { return sentences.empty() && facts.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return sentences.size() + facts.size(); }
};

/// Items whose score is strictly greater than `threshold`. Missing scores are
/// never flagged. Fact level lists each (sentence, fact) occurrence.
FlaggedSet flag_hallucinations(const ScoreReport& report, FlagLevel level, double threshold);

/// "1. first\n2. second" (no trailing newline).
std::string render_numbered_sentences(std::span<const std::string> sentences);
/// Empty numbered list "1.\n2.\n..." of length n.
std::string render_format(std::size_t n);
std::string render_incorrect_sentences(std::span<const std::string> sentences, std::span<const std::size_t> flagged);
/// Facts grouped under "Sentence k: <text>" headers, one "- (h, r, t)" line each.
std::string render_incorrect_facts(std::span<const std::string> sentences, std::span<const FlaggedFact> flagged);

/// The correction prompt for `mode`. Sentence and fact modes with nothing
/// flagged fall back to the baseline prompt.
std::string correction_prompt(const PromptLibrary& prompts, const DetectionInstance& instance, CorrectionMode mode,
                              const FlaggedSet& flagged);

struct NumberedList {
    std::vector<std::string> sentences;
    std::size_t defects = 0;
};

/// Recovers exactly `originals.size()` entries from a numbered list with
/// "1.", "1)" or bare-number prefixes. Missing or empty entries fall back to
/// the original sentence and count as defects. Throws MalformedCorrection
/// when no numbered entry is found at all.
NumberedList parse_numbered_list(std::string_view completion, std::span<const std::string> originals);

struct CorrectionOutput {
    std::vector<std::string> sentences;
    std::size_t parse_defects = 0;
};

/// One model call. The caller sets the generation parameters on `ctx`
/// (temperature 0.5 by default for correction).
CorrectionOutput correct(const DetectionInstance& instance, CorrectionMode mode, const FlaggedSet& flagged,
                         PipelineContext& ctx);

/// yes -> factual, no -> non_factual, refused -> refused; any other answer,
/// or more than one of these words, is invalid.
Judgment parse_judgment(std::string_view raw);
Judgment judge_sentence(std::string_view sentence, std::string_view full_text, std::string_view source_bio,
                        PipelineContext& ctx);

struct CorrectionRun {
    std::string instance_id;
    CorrectionMode mode = CorrectionMode::baseline;
    double threshold = kFactThreshold;
    std::vector<std::string> original_sentences;
    FlaggedSet flagged;
    std::vector<std::string> corrected_sentences;
    std::vector<Judgment> judgments;
    std::size_t parse_defects = 0;
};

/// Flags (unless baseline), corrects, then judges every corrected sentence
/// against the instance's biography. Sentence and fact modes need a report.
CorrectionRun run_correction(const DetectionInstance& instance, CorrectionMode mode, const ScoreReport* report,
                             double threshold, PipelineContext& correct_ctx, PipelineContext& judge_ctx);

struct Proportions {
    double factual = 0.0;
    double non_factual = 0.0;
    double refused = 0.0;
};

struct CorrectionReport {
    std::size_t factual = 0;
    std::size_t non_factual = 0;
    std::size_t refused = 0;
    std::size_t invalid = 0;
    Proportions proportions;
    /// (p - p_base) / p_base per category; nullopt when p_base is 0.
    std::optional<double> delta_factual;
    std::optional<double> delta_non_factual;
    std::optional<double> delta_refused;

    [[nodiscard]] std::size_t judged() const noexcept { return factual + non_factual + refused; }
};

/// Proportions over judged (non-invalid) sentences and relative change
/// against the baseline judgments. Throws Error(EmptyRun).
CorrectionReport correction_report(std::span<const Judgment> judgments, std::span<const Judgment> baseline_judgments);

nlohmann::json correction_run_to_json(const CorrectionRun& run);
nlohmann::json correction_report_to_json(const CorrectionReport& report);

/// Plain-text comparison table, one row per mode.
std::string render_comparison_table(const std::map<CorrectionMode, CorrectionReport>& reports);

} // namespace fsc
