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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fsc {

enum class SentenceLabel { accurate, minor_inaccurate, major_inaccurate };

std::string_view to_string(SentenceLabel label) noexcept;

/// Accepts both the dataset spelling ("minor_inaccurate") and the hyphenated
/// one. Throws Error(UnknownLabel).
SentenceLabel parse_label(std::string_view text);

/// Minor and major inaccuracies are both the hallucinated class.
bool binarize_label(SentenceLabel label) noexcept;
bool binarize_label(std::string_view text);

/// Graded value used for passage-level ground truth: 0, 0.5, 1.
double label_value(SentenceLabel label) noexcept;

/// One evaluation unit: a passage, its sentences, N sampled re-generations,
/// and the optional gold labels and reference biography.
struct DetectionInstance {
    std::string id;
    std::string passage;
    std::vector<std::string> sentences;
    std::optional<std::vector<SentenceLabel>> sentence_labels;
    std::vector<std::string> samples;
    std::optional<std::string> source_bio;
    std::string concept_name;

    /// Mean of label_value over sentences; nullopt without labels.
    [[nodiscard]] std::optional<double> passage_label() const;
};

/// Reads a JSON array (or JSON-lines file) of records with the fields
/// gpt3_text, gpt3_sentences, gpt3_text_samples and optionally id,
/// annotation, wiki_bio_text, concept_name. Throws Error(SchemaMismatch)
/// naming the instance id and field.
std::vector<DetectionInstance> load_dataset(const std::filesystem::path& path);
std::vector<DetectionInstance> parse_dataset(const nlohmann::json& records);

nlohmann::json instance_to_json(const DetectionInstance& instance);

/// Splits on '.', '!' or '?' followed by whitespace. Only for ad-hoc input;
/// datasets ship their own sentence lists.
std::vector<std::string> naive_split_sentences(std::string_view text);

/// Text before the first " (" of `text`, trimmed; empty when there is none
/// within the first 80 bytes.
std::string concept_from_bio(std::string_view text);

} // namespace fsc
