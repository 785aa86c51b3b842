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

#include "fsc/extraction.hpp"

#include "fsc/parallel.hpp"
#include "fsc/parsers.hpp"

namespace fsc {

std::string_view to_string(ExtractionStage stage) noexcept {
    switch (stage) {
    case ExtractionStage::entities: return "entities";
    case ExtractionStage::relations: return "relations";
    case ExtractionStage::sentence_kg: return "sentence_kg";
    case ExtractionStage::sample_kg: return "sample_kg";
    }
    return "unknown";
}

std::string_view json_list_format_instructions() {
    return "Return the answer as a JSON array of strings, for example [\"first\", \"second\"]. "
           "Output only the JSON array, without any other text.";
}

std::string render_term_list(const TermSet& terms) { return nlohmann::json(terms.raw_forms()).dump(); }

namespace {

// Runs `body` and rethrows any library failure as an ExtractionError for `stage`.
template <typename Body>
auto in_stage(ExtractionStage stage, Body&& body) {
    try {
        return body();
    } catch (const ExtractionError&) {
        throw;
    } catch (const std::exception& e) {
        throw ExtractionError(stage, e.what());
    }
}

TermSet to_term_set(const std::vector<Term>& terms) {
    TermSet out;
    for (const auto& t : terms) {
        out.insert(t);
    }
    return out;
}

KgExtraction parse_kg(const std::string& completion, const Schema& schema) {
    const auto parsed = parse_triples(completion);
    KgExtraction out;
    out.skipped_lines = parsed.skipped_lines;
    for (const auto& f : parsed.facts) {
        if (out.kg.insert(f) && !(schema.entities.contains(f.head) && schema.relations.contains(f.relation) &&
                                  schema.entities.contains(f.tail))) {
            ++out.out_of_schema;
        }
    }
    return out;
}

} // namespace

TermSet extract_entities(std::string_view passage, PipelineContext& ctx) {
    return in_stage(ExtractionStage::entities, [&] {
        if (passage.empty()) {
            throw Error(ErrorCode::Precondition, "passage must be non-empty");
        }
        const auto prompt = ctx.prompts.render(
            PromptId::entities_extraction,
            {{"input", std::string(passage)}, {"format_instructions", std::string(json_list_format_instructions())}});
        const auto exchange = ctx.llm.complete(prompt, ctx.params);
        return to_term_set(parse_json_list(exchange.completion, ListKind::entities));
    });
}

TermSet extract_relations(std::string_view passage, const TermSet& entities, PipelineContext& ctx) {
    return in_stage(ExtractionStage::relations, [&] {
        const auto prompt = ctx.prompts.render(PromptId::relationships_extraction,
                                               {{"input", std::string(passage)},
                                                {"entities", render_term_list(entities)},
                                                {"format_instructions", std::string(json_list_format_instructions())}});
        const auto exchange = ctx.llm.complete(prompt, ctx.params);
        return to_term_set(parse_json_list(exchange.completion, ListKind::relations));
    });
}

KgExtraction extract_sentence_kg(std::string_view sentence, std::string_view passage, const Schema& schema,
                                 PipelineContext& ctx) {
    return in_stage(ExtractionStage::sentence_kg, [&] {
        const auto prompt = ctx.prompts.render(PromptId::kg_building_restricted_sentence,
                                               {{"input_sentence", std::string(sentence)},
                                                {"input_text", std::string(passage)},
                                                {"allowed_nodes", render_term_list(schema.entities)},
                                                {"allowed_relationships", render_term_list(schema.relations)}});
        return parse_kg(ctx.llm.complete(prompt, ctx.params).completion, schema);
    });
}

Schema build_sample_schema(const Schema& passage_schema, std::span<const KnowledgeGraph> sentence_kgs) {
    Schema out = passage_schema;
    for (const auto& kg : sentence_kgs) {
        for (const auto& f : kg) {
            out.entities.insert(f.head);
            out.entities.insert(f.tail);
            out.relations.insert(f.relation);
        }
    }
    return out;
}

KgExtraction extract_sample_kg(std::string_view sample, const Schema& sample_schema, PipelineContext& ctx) {
    return in_stage(ExtractionStage::sample_kg, [&] {
        const auto prompt = ctx.prompts.render(PromptId::kg_building_restricted_samples,
                                               {{"input", std::string(sample)},
                                                {"allowed_nodes", render_term_list(sample_schema.entities)},
                                                {"allowed_relationships", render_term_list(sample_schema.relations)}});
        return parse_kg(ctx.llm.complete(prompt, ctx.params).completion, sample_schema);
    });
}

PassageExtraction extract_all(const DetectionInstance& instance, PipelineContext& ctx) {
    if (instance.samples.empty()) {
        throw Error(ErrorCode::NoSamples, "instance " + instance.id + " has no samples");
    }
    PassageExtraction out;
    out.id = instance.id;
    out.passage = instance.passage;
    out.sentences = instance.sentences;
    out.samples = instance.samples;

    out.passage_schema.entities = extract_entities(instance.passage, ctx);
    out.passage_schema.relations = extract_relations(instance.passage, out.passage_schema.entities, ctx);

    std::vector<KgExtraction> sentence_results(instance.sentences.size());
    parallel_for(instance.sentences.size(), ctx.max_parallel, [&](std::size_t i) {
        sentence_results[i] = extract_sentence_kg(instance.sentences[i], instance.passage, out.passage_schema, ctx);
    });
    for (auto& r : sentence_results) {
        out.diagnostics.skipped_sentence_lines += r.skipped_lines;
        out.diagnostics.out_of_schema_sentence_facts += r.out_of_schema;
        out.sentence_kgs.push_back(std::move(r.kg));
    }
    out.passage_kg = kg_union(out.sentence_kgs);
    out.sample_schema = build_sample_schema(out.passage_schema, out.sentence_kgs);

    std::vector<KgExtraction> sample_results(instance.samples.size());
    parallel_for(instance.samples.size(), ctx.max_parallel, [&](std::size_t i) {
        sample_results[i] = extract_sample_kg(instance.samples[i], out.sample_schema, ctx);
    });
    for (auto& r : sample_results) {
        out.diagnostics.skipped_sample_lines += r.skipped_lines;
        out.diagnostics.out_of_schema_sample_facts += r.out_of_schema;
        out.sample_kgs.push_back(std::move(r.kg));
    }
    return out;
}

nlohmann::json extraction_to_json(const PassageExtraction& e) {
    return {
        {"id", e.id},
        {"passage", e.passage},
        {"sentences", e.sentences},
        {"samples", e.samples},
        {"passage_schema", e.passage_schema},
        {"sentence_kgs", e.sentence_kgs},
        {"passage_kg", e.passage_kg},
        {"sample_schema", e.sample_schema},
        {"sample_kgs", e.sample_kgs},
        {"diagnostics",
         {{"skipped_sentence_lines", e.diagnostics.skipped_sentence_lines},
          {"skipped_sample_lines", e.diagnostics.skipped_sample_lines},
          {"out_of_schema_sentence_facts", e.diagnostics.out_of_schema_sentence_facts},
          {"out_of_schema_sample_facts", e.diagnostics.out_of_schema_sample_facts}}},
    };
}

PassageExtraction extraction_from_json(const nlohmann::json& j) {
    PassageExtraction e;
    try {
        e.id = j.at("id").get<std::string>();
        e.passage = j.at("passage").get<std::string>();
        e.sentences = j.at("sentences").get<std::vector<std::string>>();
        e.samples = j.at("samples").get<std::vector<std::string>>();
        e.passage_schema = j.at("passage_schema").get<Schema>();
        e.sentence_kgs = j.at("sentence_kgs").get<std::vector<KnowledgeGraph>>();
        e.sample_schema = j.at("sample_schema").get<Schema>();
        e.sample_kgs = j.at("sample_kgs").get<std::vector<KnowledgeGraph>>();
        const auto& d = j.at("diagnostics");
        e.diagnostics.skipped_sentence_lines = d.value("skipped_sentence_lines", std::size_t{0});
        e.diagnostics.skipped_sample_lines = d.value("skipped_sample_lines", std::size_t{0});
        e.diagnostics.out_of_schema_sentence_facts = d.value("out_of_schema_sentence_facts", std::size_t{0});
        e.diagnostics.out_of_schema_sample_facts = d.value("out_of_schema_sample_facts", std::size_t{0});
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::SchemaMismatch, std::string("extraction record: ") + ex.what());
    }
    if (e.sentence_kgs.size() != e.sentences.size() || e.sample_kgs.size() != e.samples.size()) {
        throw Error(ErrorCode::SchemaMismatch, "extraction " + e.id + ": KG lists misaligned with texts");
    }
    // The passage KG is always derived, never trusted from disk.
    e.passage_kg = kg_union(e.sentence_kgs);
    return e;
}

} // namespace fsc
