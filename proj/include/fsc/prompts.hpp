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

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace fsc {

enum class PromptId {
    entities_extraction,
    relationships_extraction,
    kg_building_restricted_sentence,
    kg_building_restricted_samples,
    fact_prediction_with_inference,
    fact_text_prediction_with_inference,
    correction_baseline,
    correction_sentences,
    correction_facts,
    correction_evaluation,
    annotate_fact_level,
};

inline constexpr std::array kAllPrompts = {
    PromptId::entities_extraction,           PromptId::relationships_extraction,
    PromptId::kg_building_restricted_sentence, PromptId::kg_building_restricted_samples,
    PromptId::fact_prediction_with_inference, PromptId::fact_text_prediction_with_inference,
    PromptId::correction_baseline,           PromptId::correction_sentences,
    PromptId::correction_facts,              PromptId::correction_evaluation,
    PromptId::annotate_fact_level,
};

/// Asset file stem, e.g. "entities_extraction".
std::string_view prompt_name(PromptId id) noexcept;

using PromptVars = std::map<std::string, std::string, std::less<>>;

/// Text with `{name}` placeholders; `{{` and `}}` are literal braces.
class PromptTemplate {
  public:
    PromptTemplate() = default;
    explicit PromptTemplate(std::string text);

    /// Throws Error(MissingPlaceholder) when a placeholder has no value.
    [[nodiscard]] std::string render(const PromptVars& vars) const;
    [[nodiscard]] const std::set<std::string>& placeholders() const noexcept { return placeholders_; }
    [[nodiscard]] const std::string& text() const noexcept { return text_; }

  private:
    std::string text_;
    std::set<std::string> placeholders_;
};

/// The template set used by a run. The built-in set is compiled from
/// prompts/<version>/*.txt; a directory override replaces any file it holds.
class PromptLibrary {
  public:
    static const PromptLibrary& builtin();
    static PromptLibrary with_overrides(const std::filesystem::path& dir);

    [[nodiscard]] const PromptTemplate& get(PromptId id) const;
    [[nodiscard]] std::string render(PromptId id, const PromptVars& vars) const { return get(id).render(vars); }
    [[nodiscard]] const std::string& version() const noexcept { return version_; }

  private:
    std::string version_;
    std::map<PromptId, PromptTemplate> templates_;
};

/// Placeholders each template must expose; checked when loading overrides.
const std::set<std::string>& required_placeholders(PromptId id);

} // namespace fsc
