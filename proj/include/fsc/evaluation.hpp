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

#include "fsc/dataset.hpp"
#include "fsc/extraction.hpp"
#include "fsc/metrics.hpp"
#include "fsc/scoring.hpp"

namespace fsc {

/// What to do with items whose score is missing (e.g. sentences without facts).
enum class MissingScorePolicy { exclude, impute_zero };

std::string_view to_string(MissingScorePolicy policy) noexcept;
MissingScorePolicy parse_missing_policy(std::string_view text);

/// A metric is either a value or the reason it could not be computed.
struct MetricValue {
    std::optional<double> value;
    std::string error;
};

struct MetricResult {
    MetricValue auc_pr;
    MetricValue pearson;
    MetricValue spearman;
    std::size_t n = 0;
    std::size_t n_excluded = 0;
    MissingScorePolicy policy = MissingScorePolicy::exclude;
};

/// Sentence-level AUC-PR over every labeled sentence. Hallucinated sentences
/// are the positive class.
MetricResult evaluate_sentences(std::span<const ScoreReport> reports, std::span<const DetectionInstance> dataset,
                                MissingScorePolicy policy);

/// Passage-level Pearson and Spearman against the mean graded label.
MetricResult evaluate_passages(std::span<const ScoreReport> reports, std::span<const DetectionInstance> dataset,
                               MissingScorePolicy policy);

/// AUC-PR of an arbitrary scorer on (score, hallucinated) pairs, with
/// missing scores handled per policy.
MetricResult evaluate_scored_items(std::span<const std::optional<double>> scores, std::span<const bool> labels,
                                   MissingScorePolicy policy);

/// Sentence-level and fact-level random baselines seeded from one seed.
MetricResult random_sentence_baseline(std::span<const DetectionInstance> dataset, std::uint64_t seed);

/// Throws Error(IdMismatch) unless reports and dataset cover the same ids.
void check_alignment(std::span<const ScoreReport> reports, std::span<const DetectionInstance> dataset);

/// Rescores `extraction` using the first n samples for each n.
/// Throws Precondition when some n lies outside [1, number of samples].
std::vector<ScoreReport> sweep_samples(const PassageExtraction& extraction, ScoreOptions options,
                                       std::span<const std::size_t> n_values, PipelineContext* ctx);

struct SweepPoint {
    std::size_t n = 0;
    MetricResult sentence;
    MetricResult passage;
};

/// Corpus sweep: sentence AUC-PR and passage correlations for each n.
std::vector<SweepPoint> sweep_corpus(std::span<const PassageExtraction> extractions,
                                     std::span<const DetectionInstance> dataset, const ScoreOptions& options,
                                     std::span<const std::size_t> n_values, MissingScorePolicy policy,
                                     PipelineContext* ctx);

/// Whether the reference biography supports the fact; nullopt when the
/// judge's answer is neither yes nor no, or the call fails.
std::optional<bool> annotate_fact_judge(const Fact& fact, std::string_view source_bio, PipelineContext& ctx);

struct FactAnnotation {
    std::string instance_id;
    Fact fact;
    std::optional<bool> supported;
};

/// Judges every passage fact of every instance that has a biography.
std::vector<FactAnnotation> annotate_facts(std::span<const PassageExtraction> extractions,
                                           std::span<const DetectionInstance> dataset, PipelineContext& ctx);

/// Fact-level AUC-PR: unsupported facts are the positive class; facts without
/// an annotation are left out of both n and n_excluded accounting.
MetricResult evaluate_facts(std::span<const ScoreReport> reports, std::span<const FactAnnotation> annotations,
                            MissingScorePolicy policy);

nlohmann::json metric_to_json(const MetricResult& m);
std::string sweep_to_csv(std::span<const SweepPoint> points);
std::string metrics_to_csv(const MetricResult& sentence, const MetricResult& passage);

} // namespace fsc
