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

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "fsc/commands.hpp"
#include "fsc/config.hpp"
#include "fsc/error.hpp"

namespace {

const std::map<std::string, std::string>& flag_help() {
    static const std::map<std::string, std::string> help = {
        {"endpoint", "chat-completions URL"},
        {"model", "model id for every stage"},
        {"detection-model", "model id for extraction and scoring"},
        {"correction-model", "model id for rewriting"},
        {"judge-model", "model id for factuality judging"},
        {"detection-temperature", "default 0.0"},
        {"correction-temperature", "default 0.5"},
        {"judge-temperature", "default 0.0"},
        {"max-tokens", "completion limit per call"},
        {"seed", "seed for generation and the random baseline"},
        {"n-samples", "use the first n samples, or 'all'"},
        {"sweep-max", "largest n in a sweep (default 20)"},
        {"scorer", "frequency, llm_kg or llm_text"},
        {"aggregation", "mean or max"},
        {"missing-policy", "exclude or impute_zero"},
        {"fact-level", "also judge and evaluate individual facts (true/false)"},
        {"fact-threshold", "fact-mode flag threshold"},
        {"sentence-threshold", "sentence-mode flag threshold"},
        {"dot-threshold", "red/green cut for export-dot"},
        {"modes", "comma list of baseline,sentence,fact"},
        {"prompts-dir", "directory of prompt overrides"},
        {"cache", "response cache (JSON lines)"},
        {"replay", "serve completions from a session file only"},
        {"record", "write this run's exchanges to a session file"},
        {"out-dir", "output directory"},
        {"max-in-flight", "concurrent model calls"},
        {"call-budget", "maximum backend calls, or 'none'"},
        {"max-retries", "retries on transient failures"},
        {"timeout", "HTTP timeout in seconds"},
        {"quiet", "suppress progress lines (true/false)"},
    };
    return help;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling-based hallucination detection over knowledge-graph facts"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_file;
    app.add_option("--config", config_file, "key = value config file")->check(CLI::ExistingFile);

    std::map<std::string, std::string> flags;
    for (const auto& key : fsc::config_keys()) {
        const auto it = flag_help().find(key);
        app.add_option("--" + key, flags[key], it == flag_help().end() ? "" : it->second);
    }

    std::string dataset;
    std::string reports;
    std::string extractions;
    std::string report;
    std::string extraction;
    std::string output;

    auto* detect = app.add_subcommand("detect", "extract, score and write one report per instance");
    detect->add_option("--dataset", dataset, "dataset JSON or JSON lines")->required();

    auto* evaluate = app.add_subcommand("evaluate", "AUC-PR and correlations of written reports");
    evaluate->add_option("--dataset", dataset)->required();
    evaluate->add_option("--reports", reports, "default <out-dir>/reports");

    auto* sweep = app.add_subcommand("sweep", "rescore with the first n samples for n = 1..N");
    sweep->add_option("--dataset", dataset)->required();
    sweep->add_option("--extractions", extractions, "default <out-dir>/extractions");

    auto* correct = app.add_subcommand("correct", "rewrite passages and judge the result");
    correct->add_option("--dataset", dataset)->required();
    correct->add_option("--reports", reports, "default <out-dir>/reports");

    auto* dot = app.add_subcommand("export-dot", "passage graph with scored edges");
    dot->add_option("--report", report)->required()->check(CLI::ExistingFile);
    dot->add_option("--extraction", extraction)->required()->check(CLI::ExistingFile);
    dot->add_option("--output", output, "default stdout");

    auto* record = app.add_subcommand("record-session", "export the response cache as a session file");
    record->add_option("--output", output)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        fsc::RunConfig config;
        if (!config_file.empty()) {
            fsc::apply_config_file(config, config_file);
        }
        for (const auto& [key, value] : flags) {
            if (app.count("--" + key) > 0) {
                fsc::apply_setting(config, key, value);
            }
        }
        fsc::apply_environment(config);

        const auto out_dir = config.out_dir;
        if (detect->parsed()) {
            return fsc::cmd_detect(config, dataset, std::cerr);
        }
        if (evaluate->parsed()) {
            return fsc::cmd_evaluate(config, dataset, reports.empty() ? out_dir / "reports" : std::filesystem::path(reports), std::cerr);
        }
        if (sweep->parsed()) {
            return fsc::cmd_sweep(config, dataset, extractions.empty() ? out_dir / "extractions" : std::filesystem::path(extractions),
                                  std::cerr);
        }
        if (correct->parsed()) {
            return fsc::cmd_correct(config, dataset, reports.empty() ? out_dir / "reports" : std::filesystem::path(reports), std::cerr);
        }
        if (dot->parsed()) {
            return fsc::cmd_export_dot(config, report, extraction, output, std::cout);
        }
        if (record->parsed()) {
            return fsc::cmd_record_session(config, output, std::cerr);
        }
    } catch (const fsc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
