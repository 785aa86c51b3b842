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

#include "fsc/dataset.hpp"

#include <fstream>
#include <sstream>

#include "fsc/error.hpp"

namespace fsc {

std::string_view to_string(SentenceLabel label) noexcept {
    switch (label) {
    case SentenceLabel::accurate: return "accurate";
    case SentenceLabel::minor_inaccurate: return "minor_inaccurate";
    case SentenceLabel::major_inaccurate: return "major_inaccurate";
    }
    return "accurate";
}

SentenceLabel parse_label(std::string_view text) {
    if (text == "accurate") {
        return SentenceLabel::accurate;
    }
    if (text == "minor_inaccurate" || text == "minor-inaccurate") {
        return SentenceLabel::minor_inaccurate;
    }
    if (text == "major_inaccurate" || text == "major-inaccurate") {
        return SentenceLabel::major_inaccurate;
    }
    throw Error(ErrorCode::UnknownLabel, "unknown sentence label '" + std::string(text) + "'");
}

bool binarize_label(SentenceLabel label) noexcept { return label != SentenceLabel::accurate; }

bool binarize_label(std::string_view text) { return binarize_label(parse_label(text)); }

double label_value(SentenceLabel label) noexcept {
    switch (label) {
    case SentenceLabel::accurate: return 0.0;
    case SentenceLabel::minor_inaccurate: return 0.5;
    case SentenceLabel::major_inaccurate: return 1.0;
    }
    return 0.0;
}

std::optional<double> DetectionInstance::passage_label() const {
    if (!sentence_labels || sentence_labels->empty()) {
        return std::nullopt;
    }
    double sum = 0.0;
    for (const auto l : *sentence_labels) {
        sum += label_value(l);
    }
    return sum / static_cast<double>(sentence_labels->size());
}

namespace {

std::string trim_copy(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void mismatch(const std::string& id, const std::string& field, const std::string& what) {
    throw Error(ErrorCode::SchemaMismatch, "instance " + id + ", field " + field + ": " + what);
}

std::vector<std::string> string_list(const nlohmann::json& rec, const std::string& id, const char* field) {
    if (!rec.contains(field)) {
        mismatch(id, field, "missing");
    }
    const auto& arr = rec.at(field);
    if (!arr.is_array()) {
        mismatch(id, field, "expected an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& item : arr) {
        if (!item.is_string()) {
            mismatch(id, field, "expected an array of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

DetectionInstance parse_instance(const nlohmann::json& rec, std::size_t index) {
    if (!rec.is_object()) {
        mismatch(std::to_string(index), "<record>", "expected an object");
    }
    DetectionInstance inst;
    if (rec.contains("id")) {
        inst.id = rec.at("id").is_string() ? rec.at("id").get<std::string>() : rec.at("id").dump();
    } else if (rec.contains("wiki_bio_test_idx")) {
        inst.id = rec.at("wiki_bio_test_idx").dump();
    } else {
        inst.id = std::to_string(index);
    }
    if (!rec.contains("gpt3_text") || !rec.at("gpt3_text").is_string()) {
        mismatch(inst.id, "gpt3_text", "missing or not a string");
    }
    inst.passage = rec.at("gpt3_text").get<std::string>();
    inst.sentences = string_list(rec, inst.id, "gpt3_sentences");
    inst.samples = string_list(rec, inst.id, "gpt3_text_samples");
    if (inst.sentences.empty()) {
        mismatch(inst.id, "gpt3_sentences", "no sentences");
    }
    if (inst.samples.empty()) {
        mismatch(inst.id, "gpt3_text_samples", "at least one sample is required");
    }
    if (rec.contains("annotation") && !rec.at("annotation").is_null()) {
        std::vector<SentenceLabel> labels;
        for (const auto& text : string_list(rec, inst.id, "annotation")) {
            try {
                labels.push_back(parse_label(text));
            } catch (const Error& e) {
                mismatch(inst.id, "annotation", e.what());
            }
        }
        if (labels.size() != inst.sentences.size()) {
            mismatch(inst.id, "annotation",
                     std::to_string(labels.size()) + " labels for " + std::to_string(inst.sentences.size()) +
                         " sentences");
        }
        inst.sentence_labels = std::move(labels);
    }
    if (rec.contains("wiki_bio_text") && rec.at("wiki_bio_text").is_string()) {
        inst.source_bio = rec.at("wiki_bio_text").get<std::string>();
    }
    if (rec.contains("concept_name") && rec.at("concept_name").is_string()) {
        inst.concept_name = rec.at("concept_name").get<std::string>();
    } else {
        inst.concept_name = concept_from_bio(inst.source_bio.value_or(inst.passage));
        if (inst.concept_name.empty()) {
            inst.concept_name = concept_from_bio(inst.passage);
        }
        if (inst.concept_name.empty()) {
            inst.concept_name = inst.id;
        }
    }
    return inst;
}

} // namespace

std::vector<DetectionInstance> parse_dataset(const nlohmann::json& records) {
    const nlohmann::json* list = &records;
    if (records.is_object() && records.contains("instances")) {
        list = &records.at("instances");
    }
    if (!list->is_array()) {
        throw Error(ErrorCode::SchemaMismatch, "dataset must be an array of records");
    }
    std::vector<DetectionInstance> out;
    out.reserve(list->size());
    for (std::size_t i = 0; i < list->size(); ++i) {
        out.push_back(parse_instance(list->at(i), i));
    }
    return out;
}

std::vector<DetectionInstance> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read dataset " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    auto whole = nlohmann::json::parse(text, nullptr, false);
    if (!whole.is_discarded()) {
        return parse_dataset(whole);
    }
    // JSON lines
    nlohmann::json records = nlohmann::json::array();
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (trim_copy(line).empty()) {
            continue;
        }
        auto rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded()) {
            throw Error(ErrorCode::SchemaMismatch, path.string() + ":" + std::to_string(line_no) + ": not JSON");
        }
        records.push_back(std::move(rec));
    }
    return parse_dataset(records);
}

nlohmann::json instance_to_json(const DetectionInstance& inst) {
    nlohmann::json j = {{"id", inst.id},
                        {"gpt3_text", inst.passage},
                        {"gpt3_sentences", inst.sentences},
                        {"gpt3_text_samples", inst.samples},
                        {"concept_name", inst.concept_name}};
    if (inst.sentence_labels) {
        auto& arr = j["annotation"] = nlohmann::json::array();
        for (const auto l : *inst.sentence_labels) {
            arr.push_back(to_string(l));
        }
    }
    if (inst.source_bio) {
        j["wiki_bio_text"] = *inst.source_bio;
    }
    return j;
}

std::vector<std::string> naive_split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        const bool terminal = c == '.' || c == '!' || c == '?';
        const bool boundary = i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '\n' || text[i + 1] == '\t';
        if (terminal && boundary) {
            auto s = trim_copy(text.substr(start, i + 1 - start));
            if (!s.empty()) {
                out.push_back(std::move(s));
            }
            start = i + 1;
        }
    }
    if (auto rest = trim_copy(text.substr(std::min(start, text.size()))); !rest.empty()) {
        out.push_back(std::move(rest));
    }
    return out;
}

std::string concept_from_bio(std::string_view text) {
    const auto paren = text.find(" (");
    if (paren == std::string_view::npos || paren > 80) {
        return {};
    }
    return trim_copy(text.substr(0, paren));
}

} // namespace fsc
