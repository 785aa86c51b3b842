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

#include "fsc/prompts.hpp"

#include <fstream>
#include <sstream>

#include "fsc/error.hpp"
#include "prompt_assets.hpp"

namespace fsc {

std::string_view prompt_name(PromptId id) noexcept {
    switch (id) {
    case PromptId::entities_extraction: return "entities_extraction";
    case PromptId::relationships_extraction: return "relationships_extraction";
    case PromptId::kg_building_restricted_sentence: return "kg_building_restricted_sentence";
    case PromptId::kg_building_restricted_samples: return "kg_building_restricted_samples";
    case PromptId::fact_prediction_with_inference: return "fact_prediction_with_inference";
    case PromptId::fact_text_prediction_with_inference: return "fact_text_prediction_with_inference";
    case PromptId::correction_baseline: return "correction_baseline";
    case PromptId::correction_sentences: return "correction_sentences";
    case PromptId::correction_facts: return "correction_facts";
    case PromptId::correction_evaluation: return "correction_evaluation";
    case PromptId::annotate_fact_level: return "annotate_fact_level";
    }
    return "";
}

namespace {

// Calls on_literal for text runs and on_placeholder for each {name}.
template <typename Literal, typename Placeholder>
void scan_template(std::string_view text, Literal&& on_literal, Placeholder&& on_placeholder) {
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if ((c == '{' || c == '}') && i + 1 < text.size() && text[i + 1] == c) {
            on_literal(std::string_view(&text[i], 1));
            i += 2;
            continue;
        }
        if (c == '{') {
            const auto close = text.find('}', i + 1);
            if (close != std::string_view::npos) {
                const auto name = text.substr(i + 1, close - i - 1);
                const bool identifier =
                    !name.empty() && name.find_first_not_of("abcdefghijklmnopqrstuvwxyz_0123456789") == std::string_view::npos;
                if (identifier) {
                    on_placeholder(name);
                    i = close + 1;
                    continue;
                }
            }
        }
        on_literal(text.substr(i, 1));
        ++i;
    }
}

} // namespace

PromptTemplate::PromptTemplate(std::string text) : text_(std::move(text)) {
    scan_template(text_, [](std::string_view) {}, [this](std::string_view name) { placeholders_.emplace(name); });
}

std::string PromptTemplate::render(const PromptVars& vars) const {
    std::string out;
    out.reserve(text_.size() * 2);
    scan_template(
        text_, [&](std::string_view lit) { out.append(lit); },
        [&](std::string_view name) {
            const auto it = vars.find(name);
            if (it == vars.end()) {
                throw Error(ErrorCode::MissingPlaceholder, "no value for {" + std::string(name) + "}");
            }
            out.append(it->second);
        });
    return out;
}

const std::set<std::string>& required_placeholders(PromptId id) {
    static const std::map<PromptId, std::set<std::string>> kRequired = {
        {PromptId::entities_extraction, {"input", "format_instructions"}},
        {PromptId::relationships_extraction, {"input", "entities", "format_instructions"}},
        {PromptId::kg_building_restricted_sentence,
         {"input_sentence", "input_text", "allowed_nodes", "allowed_relationships"}},
        {PromptId::kg_building_restricted_samples, {"input", "allowed_nodes", "allowed_relationships"}},
        {PromptId::fact_prediction_with_inference, {"input", "knowledge_graph"}},
        {PromptId::fact_text_prediction_with_inference, {"input", "context"}},
        {PromptId::correction_baseline, {"concept_name", "generated_sentences", "format"}},
        {PromptId::correction_sentences, {"concept_name", "generated_sentences", "incorrect_sentences", "format"}},
        {PromptId::correction_facts, {"concept_name", "generated_sentences", "incorrect_facts", "format"}},
        {PromptId::correction_evaluation, {"source", "full_text", "input"}},
        {PromptId::annotate_fact_level, {"fact", "source"}},
    };
    return kRequired.at(id);
}

const PromptLibrary& PromptLibrary::builtin() {
    static const PromptLibrary lib = [] {
        PromptLibrary l;
        l.version_ = std::string(assets::kPromptVersion);
        for (const auto id : kAllPrompts) {
            l.templates_.emplace(id, PromptTemplate(std::string(assets::prompt_text(prompt_name(id)))));
        }
        return l;
    }();
    return lib;
}

PromptLibrary PromptLibrary::with_overrides(const std::filesystem::path& dir) {
    PromptLibrary lib = builtin();
    lib.version_ += "+" + dir.filename().string();
    for (const auto id : kAllPrompts) {
        const auto file = dir / (std::string(prompt_name(id)) + ".txt");
        std::ifstream in(file);
        if (!in) {
            continue;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        PromptTemplate t(ss.str());
        for (const auto& name : required_placeholders(id)) {
            if (!t.placeholders().contains(name)) {
                throw Error(ErrorCode::Config, file.string() + " lacks placeholder {" + name + "}");
            }
        }
        lib.templates_.insert_or_assign(id, std::move(t));
    }
    return lib;
}

const PromptTemplate& PromptLibrary::get(PromptId id) const { return templates_.at(id); }

} // namespace fsc
