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

#include "fsc/evaluation.hpp"

#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "fsc/error.hpp"
#include "fsc/parallel.hpp"

namespace fsc {

std::string_view to_string(MissingScorePolicy policy) noexcept {
    return policy == MissingScorePolicy::impute_zero ? "impute_zero" : "exclude";
}

MissingScorePolicy parse_missing_policy(std::string_view text) {
    if (text == "exclude") {
        return MissingScorePolicy::exclude;
    }
    if (text == "impute_zero" || text == "impute-zero" || text == "zero") {
        return MissingScorePolicy::impute_zero;
    }
    throw Error(ErrorCode::Config, "unknown missing-score policy '" + std::string(text) + "'");
}

namespace {

template <typename Fn>
MetricValue guarded(Fn&& fn) {
    try {
        return {fn(), {}};
    } catch (const Error& e) {
        return {std::nullopt, e.what()};
    }
}

std::map<std::string, const DetectionInstance*> index_dataset(std::span<const DetectionInstance> dataset) {
    std::map<std::string, const DetectionInstance*> out;
    for (const auto& inst : dataset) {
        out.emplace(inst.id, &inst);
    }
    return out;
}

// Applies the missing-score policy; returns kept scores and their partners.
template <typename T>
std::size_t collect(std::span<const std::optional<double>> scores, std::span<const T> partners,
                    MissingScorePolicy policy, std::vector<double>& kept_scores, std::vector<T>& kept_partners) {
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i]) {
            kept_scores.push_back(*scores[i]);
        } else if (policy == MissingScorePolicy::impute_zero) {
            kept_scores.push_back(0.0);
        } else {
            ++excluded;
            continue;
        }
        kept_partners.push_back(partners[i]);
    }
    return excluded;
}

} // namespace

void check_alignment(std::span<const ScoreReport> reports, std::span<const DetectionInstance> dataset) {
    const auto by_id = index_dataset(dataset);
    std::set<std::string> seen;
    for (const auto& r : reports) {
        const auto it = by_id.find(r.id);
        if (it == by_id.end()) {
            throw Error(ErrorCode::IdMismatch, "report " + r.id + " has no dataset instance");
        }
        if (r.sentences.size() != it->second->sentences.size()) {
            throw Error(ErrorCode::IdMismatch, "report " + r.id + " has " + std::to_string(r.sentences.size()) +
                                                   " sentences, dataset has " +
                                                   std::to_string(it->second->sentences.size()));
        }
        seen.insert(r.id);
    }
    for (const auto& inst : dataset) {
        if (!seen.contains(inst.id)) {
            throw Error(ErrorCode::IdMismatch, "dataset instance " + inst.id + " has no report");
        }
    }
}

namespace {

// Hallucinated/unsupported flags kept as bytes; std::vector<bool> has no span view.
using LabelBytes = std::vector<char>;

MetricResult evaluate_items(std::span<const std::optional<double>> scores, const LabelBytes& labels,
                            MissingScorePolicy policy) {
    if (scores.size() != labels.size()) {
        throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
    }
    MetricResult m;
    m.policy = policy;
    std::vector<double> kept;
    LabelBytes kept_labels;
    m.n_excluded = collect<char>(scores, labels, policy, kept, kept_labels);
    m.n = kept.size();
    const auto flags = std::make_unique<bool[]>(kept_labels.size());
    for (std::size_t i = 0; i < kept_labels.size(); ++i) {
        flags[i] = kept_labels[i] != 0;
    }
    m.auc_pr = guarded([&] { return auc_pr(kept, std::span<const bool>(flags.get(), kept_labels.size())); });
    return m;
}

} // namespace

MetricResult evaluate_scored_items(std::span<const std::optional<double>> scores, std::span<const bool> labels,
                                   MissingScorePolicy policy) {
    return evaluate_items(scores, LabelBytes(labels.begin(), labels.end()), policy);
}

MetricResult evaluate_sentences(std::span<const ScoreReport> reports, std::span<const DetectionInstance> dataset,
                                MissingScorePolicy policy) {
    check_alignment(reports, dataset);
    const auto by_id = index_dataset(dataset);
    std::vector<std::optional<double>> scores;
    LabelBytes labels;
    for (const auto& r : reports) {
        const auto& inst = *by_id.at(r.id);
        if (!inst.sentence_labels) {
            continue;
        }
        for (std::size_t i = 0; i < r.sentences.size(); ++i) {
            scores.push_back(r.sentences[i].score);
            labels.push_back(binarize_label((*inst.sentence_labels)[i]) ? 1 : 0);
        }
    }
    return evaluate_items(scores, labels, policy);
}

MetricResult evaluate_passages(std::span<const ScoreReport> reports, std::span<const DetectionInstance> dataset,
                               MissingScorePolicy policy) {
    check_alignment(reports, dataset);
    const auto by_id = index_dataset(dataset);
    std::vector<std::optional<double>> scores;
    std::vector<double> gold;
    for (const auto& r : reports) {
        if (const auto label = by_id.at(r.id)->passage_label()) {
            scores.push_back(r.passage_score);
            gold.push_back(*label);
        }
    }
    MetricResult m;
    m.policy = policy;
    std::vector<double> kept;
    std::vector<double> kept_gold;
    m.n_excluded = collect<double>(scores, gold, policy, kept, kept_gold);
    m.n = kept.size();
    m.pearson = guarded([&] { return pearson(kept, kept_gold); });
    m.spearman = guarded([&] { return spearman(kept, kept_gold); });
    return m;
}

MetricResult random_sentence_baseline(std::span<const DetectionInstance> dataset, std::uint64_t seed) {
    LabelBytes labels;
    for (const auto& inst : dataset) {
        if (inst.sentence_labels) {
            for (const auto l : *inst.sentence_labels) {
                labels.push_back(binarize_label(l) ? 1 : 0);
            }
        }
    }
    const auto draws = random_baseline(labels.size(), seed);
    const std::vector<std::optional<double>> scores(draws.begin(), draws.end());
    return evaluate_items(scores, labels, MissingScorePolicy::exclude);
}

std::vector<ScoreReport> sweep_samples(const PassageExtraction& extraction, ScoreOptions options,
                                       std::span<const std::size_t> n_values, PipelineContext* ctx) {
    for (const auto n : n_values) {
        if (n < 1 || n > extraction.samples.size()) {
            throw Error(ErrorCode::Precondition, "sample count " + std::to_string(n) + " outside [1, " +
                                                     std::to_string(extraction.samples.size()) + "]");
        }
    }
    std::vector<ScoreReport> out;
    out.reserve(n_values.size());
    for (const auto n : n_values) {
        options.n_samples = n;
        out.push_back(score_instance(extraction, options, ctx));
    }
    return out;
}

std::vector<SweepPoint> sweep_corpus(std::span<const PassageExtraction> extractions,
                                     std::span<const DetectionInstance> dataset, const ScoreOptions& options,
                                     std::span<const std::size_t> n_values, MissingScorePolicy policy,
                                     PipelineContext* ctx) {
    std::vector<std::vector<ScoreReport>> per_instance;
    per_instance.reserve(extractions.size());
    for (const auto& e : extractions) {
        per_instance.push_back(sweep_samples(e, options, n_values, ctx));
    }
    std::vector<SweepPoint> points;
    for (std::size_t k = 0; k < n_values.size(); ++k) {
        std::vector<ScoreReport> reports;
        for (const auto& series : per_instance) {
            reports.push_back(series[k]);
        }
        points.push_back({n_values[k], evaluate_sentences(reports, dataset, policy),
                          evaluate_passages(reports, dataset, policy)});
    }
    return points;
}

std::optional<bool> annotate_fact_judge(const Fact& fact, std::string_view source_bio, PipelineContext& ctx) {
    try {
        const auto prompt = ctx.prompts.render(PromptId::annotate_fact_level,
                                               {{"fact", fact.display()}, {"source", std::string(source_bio)}});
        switch (parse_yes_no(ctx.llm.complete(prompt, ctx.params).completion)) {
        case YesNoVerdict::yes: return true;
        case YesNoVerdict::no: return false;
        case YesNoVerdict::invalid: return std::nullopt;
        }
    } catch (const Error&) {
    }
    return std::nullopt;
}

std::vector<FactAnnotation> annotate_facts(std::span<const PassageExtraction> extractions,
                                           std::span<const DetectionInstance> dataset, PipelineContext& ctx) {
    const auto by_id = index_dataset(dataset);
    std::vector<FactAnnotation> out;
    for (const auto& e : extractions) {
        const auto it = by_id.find(e.id);
        if (it == by_id.end() || !it->second->source_bio) {
            continue;
        }
        for (const auto& f : e.passage_kg) {
            out.push_back({e.id, f, std::nullopt});
        }
    }
    parallel_for(out.size(), ctx.max_parallel, [&](std::size_t i) {
        out[i].supported = annotate_fact_judge(out[i].fact, *by_id.at(out[i].instance_id)->source_bio, ctx);
    });
    return out;
}

MetricResult evaluate_facts(std::span<const ScoreReport> reports, std::span<const FactAnnotation> annotations,
                            MissingScorePolicy policy) {
    std::map<std::string, const ScoreReport*> by_id;
    for (const auto& r : reports) {
        by_id.emplace(r.id, &r);
    }
    std::vector<std::optional<double>> scores;
    LabelBytes labels;
    for (const auto& a : annotations) {
        if (!a.supported) {
            continue;
        }
        const auto it = by_id.find(a.instance_id);
        if (it == by_id.end()) {
            throw Error(ErrorCode::IdMismatch, "annotation for " + a.instance_id + " has no report");
        }
        const auto fs = it->second->find_fact(a.fact);
        scores.push_back(fs ? fs->score : std::nullopt);
        labels.push_back(*a.supported ? 0 : 1);
    }
    return evaluate_items(scores, labels, policy);
}

namespace {

nlohmann::json value_json(const MetricValue& v) {
    if (v.value) {
        return *v.value;
    }
    return v.error.empty() ? nlohmann::json(nullptr) : nlohmann::json({{"error", v.error}});
}

std::string csv_value(const MetricValue& v) {
    if (!v.value) {
        return "";
    }
    std::ostringstream ss;
    ss.precision(17);
    ss << *v.value;
    return ss.str();
}

} // namespace

nlohmann::json metric_to_json(const MetricResult& m) {
    return {{"auc_pr", value_json(m.auc_pr)},
            {"pearson", value_json(m.pearson)},
            {"spearman", value_json(m.spearman)},
            {"n", m.n},
            {"n_excluded", m.n_excluded},
            {"missing_score_policy", to_string(m.policy)}};
}

std::string sweep_to_csv(std::span<const SweepPoint> points) {
    std::string out = "n,auc_pr,pearson,spearman,n_sentences,n_sentences_excluded,n_passages,n_passages_excluded\n";
    for (const auto& p : points) {
        out += std::to_string(p.n) + "," + csv_value(p.sentence.auc_pr) + "," + csv_value(p.passage.pearson) + "," +
               csv_value(p.passage.spearman) + "," + std::to_string(p.sentence.n) + "," +
               std::to_string(p.sentence.n_excluded) + "," + std::to_string(p.passage.n) + "," +
               std::to_string(p.passage.n_excluded) + "\n";
    }
    return out;
}

std::string metrics_to_csv(const MetricResult& sentence, const MetricResult& passage) {
    std::string out = "level,metric,value,n,n_excluded\n";
    out += "sentence,auc_pr," + csv_value(sentence.auc_pr) + "," + std::to_string(sentence.n) + "," +
           std::to_string(sentence.n_excluded) + "\n";
    out += "passage,pearson," + csv_value(passage.pearson) + "," + std::to_string(passage.n) + "," +
           std::to_string(passage.n_excluded) + "\n";
    out += "passage,spearman," + csv_value(passage.spearman) + "," + std::to_string(passage.n) + "," +
           std::to_string(passage.n_excluded) + "\n";
    return out;
}

} // namespace fsc
