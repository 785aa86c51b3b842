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

#include "fsc/scoring.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <unordered_map>

#include "fsc/error.hpp"
#include "fsc/parallel.hpp"

namespace fsc {

std::string_view to_string(ScorerKind kind) noexcept {
    switch (kind) {
    case ScorerKind::frequency: return "frequency";
    case ScorerKind::llm_kg: return "llm_kg";
    case ScorerKind::llm_text: return "llm_text";
    }
    return "frequency";
}

std::string_view to_string(Aggregation agg) noexcept { return agg == Aggregation::max ? "max" : "mean"; }

ScorerKind parse_scorer(std::string_view text) {
    if (text == "frequency") {
        return ScorerKind::frequency;
    }
    if (text == "llm_kg" || text == "llm-kg" || text == "kg") {
        return ScorerKind::llm_kg;
    }
    if (text == "llm_text" || text == "llm-text" || text == "text") {
        return ScorerKind::llm_text;
    }
    throw Error(ErrorCode::Config, "unknown scorer '" + std::string(text) + "'");
}

Aggregation parse_aggregation(std::string_view text) {
    if (text == "mean") {
        return Aggregation::mean;
    }
    if (text == "max") {
        return Aggregation::max;
    }
    throw Error(ErrorCode::Config, "unknown aggregation '" + std::string(text) + "'");
}

FactScore frequency_fact_score(const Fact& fact, std::span<const KnowledgeGraph> sample_kgs) {
    if (sample_kgs.empty()) {
        throw Error(ErrorCode::NoSamples, "frequency score needs at least one sample KG");
    }
    const auto hits = static_cast<std::size_t>(
        std::count_if(sample_kgs.begin(), sample_kgs.end(), [&](const KnowledgeGraph& kg) { return kg.contains(fact); }));
    const std::size_t n = sample_kgs.size();
    FactScore s;
    s.fact = fact;
    s.scorer = ScorerKind::frequency;
    s.valid_responses = n;
    s.total_responses = n;
    s.unsupported = n - hits;
    s.score = static_cast<double>(n - hits) / static_cast<double>(n);
    return s;
}

double frequency_score(const Fact& fact, std::span<const KnowledgeGraph> sample_kgs) {
    return *frequency_fact_score(fact, sample_kgs).score;
}

std::optional<double> psi_average(std::span<const YesNoVerdict> verdicts) {
    std::size_t yes = 0;
    std::size_t no = 0;
    for (const auto v : verdicts) {
        yes += v == YesNoVerdict::yes ? 1 : 0;
        no += v == YesNoVerdict::no ? 1 : 0;
    }
    if (yes + no == 0) {
        return std::nullopt;
    }
    return static_cast<double>(no) / static_cast<double>(yes + no);
}

FactScore fact_score_from_verdicts(const Fact& fact, ScorerKind scorer, std::span<const YesNoVerdict> verdicts,
                                   std::size_t failed_calls) {
    FactScore s;
    s.fact = fact;
    s.scorer = scorer;
    s.total_responses = verdicts.size();
    s.failed_calls = failed_calls;
    for (const auto v : verdicts) {
        s.valid_responses += v != YesNoVerdict::invalid ? 1 : 0;
        s.unsupported += v == YesNoVerdict::no ? 1 : 0;
    }
    s.score = psi_average(verdicts);
    return s;
}

std::string serialize_kg_for_prompt(const KnowledgeGraph& kg) {
    if (kg.empty()) {
        return "(empty)";
    }
    std::string out;
    for (const auto& f : kg.sorted()) {
        if (!out.empty()) {
            out.push_back('\n');
        }
        out += csv_field(collapse_whitespace(f.head.raw)) + "," + csv_field(collapse_whitespace(f.relation.raw)) + "," +
               csv_field(collapse_whitespace(f.tail.raw));
    }
    return out;
}

std::string kg_verdict_prompt(const PromptLibrary& prompts, const Fact& fact, const KnowledgeGraph& sample_kg) {
    return prompts.render(PromptId::fact_prediction_with_inference,
                          {{"input", fact.display()}, {"knowledge_graph", serialize_kg_for_prompt(sample_kg)}});
}

std::string text_verdict_prompt(const PromptLibrary& prompts, const Fact& fact, std::string_view sample) {
    return prompts.render(PromptId::fact_text_prediction_with_inference,
                          {{"input", fact.display()}, {"context", std::string(sample)}});
}

namespace {

struct CallOutcome {
    YesNoVerdict verdict = YesNoVerdict::invalid;
    std::optional<std::string> error;
};

CallOutcome ask(PipelineContext& ctx, const std::string& prompt) {
    try {
        return {parse_yes_no(ctx.llm.complete(prompt, ctx.params).completion), std::nullopt};
    } catch (const std::exception& e) {
        return {YesNoVerdict::invalid, std::string(e.what())};
    }
}

FactScore score_from_outcomes(const Fact& fact, ScorerKind scorer, std::span<const CallOutcome> outcomes) {
    std::vector<YesNoVerdict> verdicts;
    verdicts.reserve(outcomes.size());
    std::size_t failed = 0;
    for (const auto& o : outcomes) {
        verdicts.push_back(o.verdict);
        failed += o.error ? 1 : 0;
    }
    return fact_score_from_verdicts(fact, scorer, verdicts, failed);
}

void require_samples(std::size_t n) {
    if (n == 0) {
        throw Error(ErrorCode::NoSamples, "LLM score needs at least one sample");
    }
}

} // namespace

FactScore llm_kg_score(const Fact& fact, std::span<const KnowledgeGraph> sample_kgs, PipelineContext& ctx) {
    require_samples(sample_kgs.size());
    std::vector<CallOutcome> outcomes(sample_kgs.size());
    parallel_for(sample_kgs.size(), ctx.max_parallel,
                 [&](std::size_t i) { outcomes[i] = ask(ctx, kg_verdict_prompt(ctx.prompts, fact, sample_kgs[i])); });
    return score_from_outcomes(fact, ScorerKind::llm_kg, outcomes);
}

FactScore llm_text_score(const Fact& fact, std::span<const std::string> samples, PipelineContext& ctx) {
    require_samples(samples.size());
    std::vector<CallOutcome> outcomes(samples.size());
    parallel_for(samples.size(), ctx.max_parallel,
                 [&](std::size_t i) { outcomes[i] = ask(ctx, text_verdict_prompt(ctx.prompts, fact, samples[i])); });
    return score_from_outcomes(fact, ScorerKind::llm_text, outcomes);
}

std::optional<double> aggregate_sentence(std::span<const std::optional<double>> fact_scores, Aggregation agg) {
    std::optional<double> acc;
    std::size_t count = 0;
    for (const auto& s : fact_scores) {
        if (!s) {
            continue;
        }
        ++count;
        if (!acc) {
            acc = *s;
        } else if (agg == Aggregation::max) {
            acc = std::max(*acc, *s);
        } else {
            *acc += *s;
        }
    }
    if (acc && agg == Aggregation::mean) {
        *acc /= static_cast<double>(count);
    }
    return acc;
}

std::optional<double> aggregate_passage(std::span<const std::optional<double>> sentence_scores) {
    return aggregate_sentence(sentence_scores, Aggregation::mean);
}

double kg_size_passage_score(std::span<const KnowledgeGraph> sample_kgs, const Schema& sample_schema) {
    if (sample_kgs.empty()) {
        throw Error(ErrorCode::NoSamples, "KG-size score needs at least one sample KG");
    }
    double sum = 0.0;
    for (const auto& kg : sample_kgs) {
        sum -= static_cast<double>(restrict_kg(kg, sample_schema).size());
    }
    return sum / static_cast<double>(sample_kgs.size());
}

std::vector<std::optional<double>> ScoreReport::sentence_scores() const {
    std::vector<std::optional<double>> out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) {
        out.push_back(s.score);
    }
    return out;
}

std::optional<FactScore> ScoreReport::find_fact(const Fact& fact) const {
    for (const auto& s : sentences) {
        for (const auto& fs : s.facts) {
            if (fs.fact == fact) {
                return fs;
            }
        }
    }
    return std::nullopt;
}

ScoreReport score_instance(const PassageExtraction& extraction, const ScoreOptions& options, PipelineContext* ctx) {
    const std::size_t available = extraction.samples.size();
    const std::size_t n = std::min(options.n_samples.value_or(available), available);
    if (n == 0 || extraction.sample_kgs.size() < n) {
        throw Error(ErrorCode::NoSamples, "instance " + extraction.id + " has no usable samples");
    }
    if (options.scorer != ScorerKind::frequency && ctx == nullptr) {
        throw Error(ErrorCode::Precondition, "LLM scorers need a pipeline context");
    }
    const std::span<const KnowledgeGraph> kgs(extraction.sample_kgs.data(), n);
    const std::span<const std::string> texts(extraction.samples.data(), n);

    ScoreReport report;
    report.id = extraction.id;
    report.scorer = options.scorer;
    report.aggregation = options.aggregation;
    report.n_samples = n;
    report.diagnostics.skipped_sentence_lines = extraction.diagnostics.skipped_sentence_lines;
    report.diagnostics.skipped_sample_lines = extraction.diagnostics.skipped_sample_lines;
    report.diagnostics.out_of_schema_sample_facts = extraction.diagnostics.out_of_schema_sample_facts;
    report.kg_size_score = kg_size_passage_score(kgs, extraction.sample_schema);

    // Each distinct fact is scored once; (fact, sample) calls are flattened
    // into one fan-out and joined by index.
    const auto facts = extraction.passage_kg.facts();
    std::vector<FactScore> scored(facts.size());
    if (options.scorer == ScorerKind::frequency) {
        for (std::size_t i = 0; i < facts.size(); ++i) {
            scored[i] = frequency_fact_score(facts[i], kgs);
        }
    } else {
        std::vector<CallOutcome> outcomes(facts.size() * n);
        parallel_for(outcomes.size(), ctx->max_parallel, [&](std::size_t k) {
            const auto& fact = facts[k / n];
            const std::size_t s = k % n;
            outcomes[k] = ask(*ctx, options.scorer == ScorerKind::llm_kg ? kg_verdict_prompt(ctx->prompts, fact, kgs[s])
                                                                         : text_verdict_prompt(ctx->prompts, fact, texts[s]));
        });
        for (std::size_t i = 0; i < facts.size(); ++i) {
            const std::span<const CallOutcome> mine(outcomes.data() + i * n, n);
            scored[i] = score_from_outcomes(facts[i], options.scorer, mine);
            for (const auto& o : mine) {
                report.diagnostics.invalid_verdicts += o.verdict == YesNoVerdict::invalid ? 1 : 0;
                if (o.error) {
                    ++report.diagnostics.failed_calls;
                    auto& errs = report.diagnostics.errors;
                    if (errs.size() < 5 && std::find(errs.begin(), errs.end(), *o.error) == errs.end()) {
                        errs.push_back(*o.error);
                    }
                }
            }
        }
    }
    std::unordered_map<Fact, const FactScore*, FactHash> by_fact;
    for (const auto& fs : scored) {
        by_fact.emplace(fs.fact, &fs);
    }

    std::vector<std::optional<double>> all_fact_scores;
    for (const auto& fs : scored) {
        all_fact_scores.push_back(fs.score);
    }
    report.passage_kg_fact_mean = aggregate_passage(all_fact_scores);

    for (std::size_t u = 0; u < extraction.sentence_kgs.size(); ++u) {
        SentenceScore ss;
        ss.index = u;
        std::vector<std::optional<double>> values;
        for (const auto& f : extraction.sentence_kgs[u]) {
            ss.facts.push_back(*by_fact.at(f));
            values.push_back(ss.facts.back().score);
        }
        ss.score = aggregate_sentence(values, options.aggregation);
        report.sentences.push_back(std::move(ss));
    }
    report.passage_score = aggregate_passage(report.sentence_scores());
    return report;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> opt_from(const nlohmann::json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<double>();
}

} // namespace

nlohmann::json report_to_json(const ScoreReport& r) {
    nlohmann::json sentences = nlohmann::json::array();
    for (const auto& s : r.sentences) {
        nlohmann::json facts = nlohmann::json::array();
        for (const auto& f : s.facts) {
            facts.push_back({{"fact", f.fact},
                             {"scorer", to_string(f.scorer)},
                             {"score", opt(f.score)},
                             {"valid_responses", f.valid_responses},
                             {"total_responses", f.total_responses},
                             {"unsupported", f.unsupported},
                             {"failed_calls", f.failed_calls}});
        }
        sentences.push_back({{"index", s.index}, {"score", opt(s.score)}, {"facts", std::move(facts)}});
    }
    return {
        {"id", r.id},
        {"scorer", to_string(r.scorer)},
        {"aggregation", to_string(r.aggregation)},
        {"n_samples", r.n_samples},
        {"sentences", std::move(sentences)},
        {"passage_score", opt(r.passage_score)},
        {"passage_kg_fact_mean", opt(r.passage_kg_fact_mean)},
        {"kg_size_score", r.kg_size_score},
        {"diagnostics",
         {{"invalid_verdicts", r.diagnostics.invalid_verdicts},
          {"failed_calls", r.diagnostics.failed_calls},
          {"skipped_sentence_lines", r.diagnostics.skipped_sentence_lines},
          {"skipped_sample_lines", r.diagnostics.skipped_sample_lines},
          {"out_of_schema_sample_facts", r.diagnostics.out_of_schema_sample_facts},
          {"errors", r.diagnostics.errors}}},
    };
}

ScoreReport report_from_json(const nlohmann::json& j) {
    ScoreReport r;
    try {
        r.id = j.at("id").get<std::string>();
        r.scorer = parse_scorer(j.at("scorer").get<std::string>());
        r.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
        r.n_samples = j.at("n_samples").get<std::size_t>();
        for (const auto& sj : j.at("sentences")) {
            SentenceScore s;
            s.index = sj.at("index").get<std::size_t>();
            s.score = opt_from(sj.at("score"));
            for (const auto& fj : sj.at("facts")) {
                FactScore f;
                f.fact = fj.at("fact").get<Fact>();
                f.scorer = parse_scorer(fj.at("scorer").get<std::string>());
                f.score = opt_from(fj.at("score"));
                f.valid_responses = fj.at("valid_responses").get<std::size_t>();
                f.total_responses = fj.at("total_responses").get<std::size_t>();
                f.unsupported = fj.value("unsupported", std::size_t{0});
                f.failed_calls = fj.value("failed_calls", std::size_t{0});
                s.facts.push_back(std::move(f));
            }
            r.sentences.push_back(std::move(s));
        }
        r.passage_score = opt_from(j.at("passage_score"));
        r.passage_kg_fact_mean = opt_from(j.value("passage_kg_fact_mean", nlohmann::json(nullptr)));
        r.kg_size_score = j.value("kg_size_score", 0.0);
        if (j.contains("diagnostics")) {
            const auto& d = j.at("diagnostics");
            r.diagnostics.invalid_verdicts = d.value("invalid_verdicts", std::size_t{0});
            r.diagnostics.failed_calls = d.value("failed_calls", std::size_t{0});
            r.diagnostics.skipped_sentence_lines = d.value("skipped_sentence_lines", std::size_t{0});
            r.diagnostics.skipped_sample_lines = d.value("skipped_sample_lines", std::size_t{0});
            r.diagnostics.out_of_schema_sample_facts = d.value("out_of_schema_sample_facts", std::size_t{0});
            r.diagnostics.errors = d.value("errors", std::vector<std::string>{});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaMismatch, std::string("score report: ") + e.what());
    }
    return r;
}

} // namespace fsc
