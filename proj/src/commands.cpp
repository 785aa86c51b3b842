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

#include "fsc/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "fsc/correction.hpp"
#include "fsc/dataset.hpp"
#include "fsc/dot_export.hpp"
#include "fsc/error.hpp"
#include "fsc/evaluation.hpp"
#include "fsc/scoring.hpp"

namespace fsc {

namespace fs = std::filesystem;

namespace {

GenerationParams params_for(const RunConfig& c, const std::string& model, double temperature) {
    GenerationParams p;
    p.temperature = temperature;
    p.max_tokens = c.max_tokens;
    p.model_id = model;
    p.seed = c.seed;
    return p;
}

nlohmann::json failure(std::string_view id, std::string_view stage, const std::exception& e) {
    nlohmann::json j = {{"id", id}, {"stage", stage}, {"message", e.what()}};
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        j["code"] = to_string(err->code());
    } else {
        j["code"] = "Internal";
    }
    return j;
}

class Logger {
  public:
    Logger(std::ostream& out, bool quiet) : out_(out), quiet_(quiet) {}
    template <typename... Parts>
    void operator()(const Parts&... parts) const {
        if (!quiet_) {
            ((out_ << parts), ...);
            out_ << '\n';
        }
    }

  private:
    std::ostream& out_;
    bool quiet_;
};

std::map<std::string, ScoreReport> load_reports(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCode::Io, "reports directory not found: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::map<std::string, ScoreReport> out;
    for (const auto& f : files) {
        auto report = report_from_json(read_json(f));
        auto id = report.id;
        out.emplace(std::move(id), std::move(report));
    }
    return out;
}

std::vector<ScoreReport> in_dataset_order(const std::map<std::string, ScoreReport>& reports,
                                          std::span<const DetectionInstance> dataset) {
    std::vector<ScoreReport> out;
    for (const auto& inst : dataset) {
        if (const auto it = reports.find(inst.id); it != reports.end()) {
            out.push_back(it->second);
        }
    }
    // leftovers make check_alignment report the mismatch
    for (const auto& [id, r] : reports) {
        if (std::none_of(dataset.begin(), dataset.end(), [&](const auto& inst) { return inst.id == id; })) {
            out.push_back(r);
        }
    }
    return out;
}

std::vector<PassageExtraction> load_extractions(const fs::path& dir, std::span<const DetectionInstance> dataset) {
    std::vector<PassageExtraction> out;
    for (const auto& inst : dataset) {
        const auto path = dir / (safe_filename(inst.id) + ".json");
        if (!fs::is_regular_file(path)) {
            throw Error(ErrorCode::IdMismatch, "no extraction for instance " + inst.id + " in " + dir.string());
        }
        out.push_back(extraction_from_json(read_json(path)));
    }
    return out;
}

void log_metric(const Logger& log, std::string_view name, const MetricValue& m) {
    if (m.value) {
        log("  ", name, " = ", *m.value);
    } else {
        log("  ", name, " unavailable: ", m.error);
    }
}

} // namespace

std::string safe_filename(std::string_view id) {
    std::string out;
    for (const char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    if (out.empty() || out.front() == '.') {
        out.insert(out.begin(), '_');
    }
    return out;
}

void write_text(const fs::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + e.what());
    }
}

Runtime make_runtime(const RunConfig& config, std::shared_ptr<LlmBackend> backend) {
    Runtime rt;
    if (!backend) {
        if (!config.replay_path.empty()) {
            backend = load_session(config.replay_path);
        } else {
            backend = std::make_shared<HttpBackend>(HttpBackendConfig{config.endpoint, config.api_key, config.timeout});
        }
    }
    if (!config.cache_path.empty()) {
        rt.cache = std::make_shared<ResponseCache>(config.cache_path);
    }
    ClientOptions options;
    options.max_in_flight = config.max_in_flight;
    options.call_budget = config.call_budget;
    options.max_retries = config.max_retries;
    rt.client = std::make_unique<LlmClient>(std::move(backend), options, rt.cache);
    rt.prompts = config.prompts_dir.empty() ? PromptLibrary::builtin() : PromptLibrary::with_overrides(config.prompts_dir);
    rt.detection = params_for(config, config.detection_model, config.detection_temperature);
    rt.correction = params_for(config, config.correction_model, config.correction_temperature);
    rt.judge = params_for(config, config.judge_model, config.judge_temperature);
    rt.max_parallel = config.max_in_flight;
    return rt;
}

void finish_runtime(const Runtime& runtime, const RunConfig& config) {
    if (!config.record_path.empty()) {
        const auto exchanges = runtime.client->exchanges();
        record_session(exchanges, config.record_path);
    }
}

int cmd_detect(const RunConfig& config, const fs::path& dataset_path, std::ostream& out,
               std::shared_ptr<LlmBackend> backend) {
    const Logger log(out, config.quiet);
    validate_config(config);
    const auto dataset = load_dataset(dataset_path);
    auto rt = make_runtime(config, std::move(backend));
    auto ctx = rt.context(rt.detection);

    const ScoreOptions options{config.scorer, config.aggregation, config.n_samples};
    nlohmann::json failures = nlohmann::json::array();
    nlohmann::json passages = nlohmann::json::object();
    for (const auto& inst : dataset) {
        const auto stem = safe_filename(inst.id);
        PassageExtraction extraction;
        try {
            extraction = extract_all(inst, ctx);
        } catch (const std::exception& e) {
            failures.push_back(failure(inst.id, "extraction", e));
            log("detect ", inst.id, ": extraction failed: ", e.what());
            continue;
        }
        try {
            const auto report = score_instance(extraction, options, &ctx);
            write_json(config.out_dir / "extractions" / (stem + ".json"), extraction_to_json(extraction));
            write_json(config.out_dir / "reports" / (stem + ".json"), report_to_json(report));
            passages[inst.id] = report.passage_score ? nlohmann::json(*report.passage_score) : nlohmann::json(nullptr);
            log("detect ", inst.id, ": ", extraction.passage_kg.size(), " facts, passage score ",
                report.passage_score ? std::to_string(*report.passage_score) : std::string("n/a"));
        } catch (const std::exception& e) {
            failures.push_back(failure(inst.id, "scoring", e));
            log("detect ", inst.id, ": scoring failed: ", e.what());
        }
    }
    finish_runtime(rt, config);

    write_json(config.out_dir / "summary.json", {{"config", config_to_json(config)},
                                                 {"prompt_version", rt.prompts.version()},
                                                 {"instances", dataset.size()},
                                                 {"succeeded", dataset.size() - failures.size()},
                                                 {"failed", failures.size()},
                                                 {"passage_scores", passages}});
    write_json(config.out_dir / "failures.json", failures);
    log("detect: ", dataset.size() - failures.size(), "/", dataset.size(), " instances, ", rt.client->backend_calls(),
        " backend calls, ", rt.client->cache_hits(), " cache hits");
    return failures.empty() ? 0 : 1;
}

int cmd_evaluate(const RunConfig& config, const fs::path& dataset_path, const fs::path& reports_dir, std::ostream& out,
                 std::shared_ptr<LlmBackend> backend) {
    const Logger log(out, config.quiet);
    validate_config(config);
    const auto dataset = load_dataset(dataset_path);
    const auto reports = in_dataset_order(load_reports(reports_dir), dataset);
    check_alignment(reports, dataset);

    const auto sentence = evaluate_sentences(reports, dataset, config.missing_policy);
    const auto passage = evaluate_passages(reports, dataset, config.missing_policy);
    const auto random = random_sentence_baseline(dataset, static_cast<std::uint64_t>(config.seed));
    nlohmann::json result = {{"sentence", metric_to_json(sentence)},
                             {"passage", metric_to_json(passage)},
                             {"random_baseline", metric_to_json(random)},
                             {"scorer", to_string(reports.empty() ? config.scorer : reports.front().scorer)}};
    log("evaluate: ", reports.size(), " reports, policy ", to_string(config.missing_policy));
    log_metric(log, "sentence AUC-PR", sentence.auc_pr);
    log_metric(log, "passage Pearson", passage.pearson);
    log_metric(log, "passage Spearman", passage.spearman);

    if (config.fact_level) {
        const auto extractions = load_extractions(reports_dir.parent_path() / "extractions", dataset);
        auto rt = make_runtime(config, std::move(backend));
        auto ctx = rt.context(rt.judge);
        const auto annotations = annotate_facts(extractions, dataset, ctx);
        const auto facts = evaluate_facts(reports, annotations, config.missing_policy);
        result["fact"] = metric_to_json(facts);
        log_metric(log, "fact AUC-PR", facts.auc_pr);
        finish_runtime(rt, config);
    }
    write_json(config.out_dir / "metrics.json", result);
    write_text(config.out_dir / "metrics.csv", metrics_to_csv(sentence, passage));
    return 0;
}

int cmd_sweep(const RunConfig& config, const fs::path& dataset_path, const fs::path& extractions_dir,
              std::ostream& out, std::shared_ptr<LlmBackend> backend) {
    const Logger log(out, config.quiet);
    validate_config(config);
    const auto dataset = load_dataset(dataset_path);
    const auto extractions = load_extractions(extractions_dir, dataset);
    std::size_t n_max = config.sweep_max;
    for (const auto& e : extractions) {
        n_max = std::min(n_max, e.samples.size());
    }
    if (n_max == 0) {
        throw Error(ErrorCode::NoSamples, "sweep needs at least one sample per instance");
    }
    std::vector<std::size_t> n_values(n_max);
    std::iota(n_values.begin(), n_values.end(), std::size_t{1});

    const ScoreOptions options{config.scorer, config.aggregation, std::nullopt};
    std::vector<SweepPoint> points;
    if (config.scorer == ScorerKind::frequency) {
        points = sweep_corpus(extractions, dataset, options, n_values, config.missing_policy, nullptr);
    } else {
        auto rt = make_runtime(config, std::move(backend));
        auto ctx = rt.context(rt.detection);
        points = sweep_corpus(extractions, dataset, options, n_values, config.missing_policy, &ctx);
        finish_runtime(rt, config);
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : points) {
        rows.push_back({{"n", p.n}, {"sentence", metric_to_json(p.sentence)}, {"passage", metric_to_json(p.passage)}});
    }
    write_json(config.out_dir / "sweep.json", rows);
    write_text(config.out_dir / "sweep.csv", sweep_to_csv(points));
    log("sweep: n = 1..", n_max, " over ", extractions.size(), " instances");
    return 0;
}

int cmd_correct(const RunConfig& config, const fs::path& dataset_path, const fs::path& reports_dir, std::ostream& out,
                std::shared_ptr<LlmBackend> backend) {
    const Logger log(out, config.quiet);
    validate_config(config);
    const auto dataset = load_dataset(dataset_path);
    std::vector<CorrectionMode> modes = config.modes;
    if (std::find(modes.begin(), modes.end(), CorrectionMode::baseline) == modes.end()) {
        modes.insert(modes.begin(), CorrectionMode::baseline);
    }
    const bool needs_reports = std::any_of(modes.begin(), modes.end(), [](auto m) { return m != CorrectionMode::baseline; });
    std::map<std::string, ScoreReport> reports;
    if (needs_reports) {
        reports = load_reports(reports_dir);
        for (const auto& inst : dataset) {
            if (!reports.contains(inst.id)) {
                throw Error(ErrorCode::Precondition, "no score report for instance " + inst.id + " in " +
                                                         reports_dir.string());
            }
        }
    }

    auto rt = make_runtime(config, std::move(backend));
    auto correct_ctx = rt.context(rt.correction);
    auto judge_ctx = rt.context(rt.judge);

    nlohmann::json failures = nlohmann::json::array();
    std::map<CorrectionMode, std::vector<Judgment>> judgments;
    for (const auto mode : modes) {
        const double threshold = mode == CorrectionMode::sentence ? config.sentence_threshold : config.fact_threshold;
        nlohmann::json runs = nlohmann::json::array();
        auto& all = judgments[mode];
        for (const auto& inst : dataset) {
            const ScoreReport* report = nullptr;
            if (const auto it = reports.find(inst.id); it != reports.end()) {
                report = &it->second;
            }
            try {
                const auto run = run_correction(inst, mode, report, threshold, correct_ctx, judge_ctx);
                all.insert(all.end(), run.judgments.begin(), run.judgments.end());
                runs.push_back(correction_run_to_json(run));
            } catch (const std::exception& e) {
                failures.push_back(failure(inst.id, to_string(mode), e));
                log("correct ", to_string(mode), " ", inst.id, ": ", e.what());
            }
        }
        write_json(config.out_dir / "correction" / (std::string(to_string(mode)) + ".json"), runs);
    }
    finish_runtime(rt, config);

    std::map<CorrectionMode, CorrectionReport> summary;
    nlohmann::json report_json = nlohmann::json::object();
    for (const auto mode : modes) {
        try {
            summary[mode] = correction_report(judgments[mode], judgments[CorrectionMode::baseline]);
            report_json[std::string(to_string(mode))] = correction_report_to_json(summary[mode]);
        } catch (const Error& e) {
            failures.push_back(failure("*", to_string(mode), e));
        }
    }
    const auto table = render_comparison_table(summary);
    write_json(config.out_dir / "correction_report.json", report_json);
    write_text(config.out_dir / "correction_table.txt", table);
    write_json(config.out_dir / "correction_failures.json", failures);
    log(table);
    return failures.empty() ? 0 : 1;
}

int cmd_export_dot(const RunConfig& config, const fs::path& report_path, const fs::path& extraction_path,
                   const fs::path& output, std::ostream& out) {
    const auto report = report_from_json(read_json(report_path));
    const auto extraction = extraction_from_json(read_json(extraction_path));
    if (report.id != extraction.id) {
        throw Error(ErrorCode::IdMismatch, "report is for " + report.id + " but extraction is for " + extraction.id);
    }
    const auto dot = export_dot(report, extraction, config.dot_threshold);
    if (output.empty()) {
        out << dot;
    } else {
        write_text(output, dot);
    }
    return 0;
}

int cmd_record_session(const RunConfig& config, const fs::path& output, std::ostream& out) {
    const Logger log(out, config.quiet);
    if (config.cache_path.empty()) {
        throw Error(ErrorCode::Config, "record-session needs --cache");
    }
    if (!fs::is_regular_file(config.cache_path)) {
        throw Error(ErrorCode::Io, "cache file not found: " + config.cache_path.string());
    }
    const ResponseCache cache(config.cache_path);
    const auto exchanges = cache.exchanges();
    record_session(exchanges, output);
    log("record-session: ", exchanges.size(), " exchanges written to ", output.string(), ", ",
        cache.rejected_on_load(), " corrupt cache records skipped");
    return 0;
}

} // namespace fsc
