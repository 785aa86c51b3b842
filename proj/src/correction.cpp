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

#include "fsc/correction.hpp"

#include <cstdio>

#include "fsc/error.hpp"
#include "fsc/parallel.hpp"
#include "fsc/parsers.hpp"

namespace fsc {

std::string_view to_string(CorrectionMode mode) noexcept {
    switch (mode) {
    case CorrectionMode::baseline: return "baseline";
    case CorrectionMode::sentence: return "sentence";
    case CorrectionMode::fact: return "fact";
    }
    return "baseline";
}

std::string_view to_string(Judgment judgment) noexcept {
    switch (judgment) {
    case Judgment::factual: return "factual";
    case Judgment::non_factual: return "non_factual";
    case Judgment::refused: return "refused";
    case Judgment::invalid: return "invalid";
    }
    return "invalid";
}

CorrectionMode parse_mode(std::string_view text) {
    if (text == "baseline") {
        return CorrectionMode::baseline;
    }
    if (text == "sentence") {
        return CorrectionMode::sentence;
    }
    if (text == "fact") {
        return CorrectionMode::fact;
    }
    throw Error(ErrorCode::Config, "unknown correction mode '" + std::string(text) + "'");
}

FlaggedSet flag_hallucinations(const ScoreReport& report, FlagLevel level, double threshold) {
    FlaggedSet out;
    for (const auto& s : report.sentences) {
        if (level == FlagLevel::sentence) {
            if (s.score && *s.score > threshold) {
                out.sentences.push_back(s.index);
            }
            continue;
        }
        for (const auto& fs : s.facts) {
            if (fs.score && *fs.score > threshold) {
                out.facts.push_back({s.index, fs.fact, *fs.score});
            }
        }
    }
    return out;
}

std::string render_numbered_sentences(std::span<const std::string> sentences) {
    std::string out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i > 0) {
            out.push_back('\n');
        }
        out += std::to_string(i + 1) + ". " + collapse_whitespace(sentences[i]);
    }
    return out;
}

std::string render_format(std::size_t n) {
    std::string out;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i > 1) {
            out.push_back('\n');
        }
        out += std::to_string(i) + ".";
    }
    return out;
}

std::string render_incorrect_sentences(std::span<const std::string> sentences, std::span<const std::size_t> flagged) {
    std::string out;
    for (const auto idx : flagged) {
        if (idx >= sentences.size()) {
            continue;
        }
        if (!out.empty()) {
            out.push_back('\n');
        }
        out += std::to_string(idx + 1) + ". " + collapse_whitespace(sentences[idx]);
    }
    return out;
}

std::string render_incorrect_facts(std::span<const std::string> sentences, std::span<const FlaggedFact> flagged) {
    std::map<std::size_t, std::vector<const FlaggedFact*>> grouped;
    for (const auto& f : flagged) {
        grouped[f.sentence].push_back(&f);
    }
    std::string out;
    for (const auto& [idx, facts] : grouped) {
        if (!out.empty()) {
            out.push_back('\n');
        }
        out += "Sentence " + std::to_string(idx + 1) + ":";
        if (idx < sentences.size()) {
            out += " " + collapse_whitespace(sentences[idx]);
        }
        for (const auto* f : facts) {
            out += "\n- " + f->fact.display();
        }
    }
    return out;
}

std::string correction_prompt(const PromptLibrary& prompts, const DetectionInstance& instance, CorrectionMode mode,
                              const FlaggedSet& flagged) {
    PromptVars vars = {{"concept_name", instance.concept_name},
                       {"generated_sentences", render_numbered_sentences(instance.sentences)},
                       {"format", render_format(instance.sentences.size())}};
    if (mode == CorrectionMode::sentence && !flagged.sentences.empty()) {
        vars["incorrect_sentences"] = render_incorrect_sentences(instance.sentences, flagged.sentences);
        return prompts.render(PromptId::correction_sentences, vars);
    }
    if (mode == CorrectionMode::fact && !flagged.facts.empty()) {
        vars["incorrect_facts"] = render_incorrect_facts(instance.sentences, flagged.facts);
        return prompts.render(PromptId::correction_facts, vars);
    }
    return prompts.render(PromptId::correction_baseline, vars);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct NumberedLine {
    std::size_t number;
    std::string_view text;
};

std::optional<NumberedLine> numbered_line(std::string_view line) {
    line = trim(line);
    std::size_t i = 0;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
        ++i;
    }
    if (i == 0 || i > 6) {
        return std::nullopt;
    }
    const std::size_t number = std::stoul(std::string(line.substr(0, i)));
    if (i < line.size() && (line[i] == '.' || line[i] == ')')) {
        ++i;
    } else if (i < line.size() && line[i] != ' ' && line[i] != '\t') {
        return std::nullopt; // "2006," is text, not a list marker
    }
    return NumberedLine{number, trim(line.substr(i))};
}

} // namespace

NumberedList parse_numbered_list(std::string_view completion, std::span<const std::string> originals) {
    std::vector<std::optional<std::string>> slots(originals.size());
    std::size_t found = 0;
    std::size_t defects = 0;
    std::size_t pos = 0;
    while (pos <= completion.size()) {
        auto nl = completion.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = completion.size();
        }
        const auto line = completion.substr(pos, nl - pos);
        pos = nl + 1;
        const auto entry = numbered_line(line);
        if (!entry) {
            continue;
        }
        ++found;
        if (entry->number < 1 || entry->number > slots.size() || slots[entry->number - 1]) {
            ++defects;
            continue;
        }
        slots[entry->number - 1] = std::string(entry->text);
    }
    if (found == 0) {
        throw Error(ErrorCode::MalformedCorrection, "no numbered entries in correction output");
    }
    NumberedList out;
    out.defects = defects;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i] && !slots[i]->empty()) {
            out.sentences.push_back(std::move(*slots[i]));
        } else {
            out.sentences.push_back(originals[i]);
            ++out.defects;
        }
    }
    return out;
}

CorrectionOutput correct(const DetectionInstance& instance, CorrectionMode mode, const FlaggedSet& flagged,
                         PipelineContext& ctx) {
    const auto prompt = correction_prompt(ctx.prompts, instance, mode, flagged);
    const auto exchange = ctx.llm.complete(prompt, ctx.params);
    auto parsed = parse_numbered_list(exchange.completion, instance.sentences);
    return {std::move(parsed.sentences), parsed.defects};
}

Judgment parse_judgment(std::string_view raw) {
    const auto tokens = word_tokens(raw);
    const bool yes = tokens.contains("yes");
    const bool no = tokens.contains("no");
    const bool refused = tokens.contains("refused");
    if (yes + no + refused != 1) {
        return Judgment::invalid;
    }
    return yes ? Judgment::factual : no ? Judgment::non_factual : Judgment::refused;
}

Judgment judge_sentence(std::string_view sentence, std::string_view full_text, std::string_view source_bio,
                        PipelineContext& ctx) {
    const auto prompt = ctx.prompts.render(
        PromptId::correction_evaluation,
        {{"source", std::string(source_bio)}, {"full_text", std::string(full_text)}, {"input", std::string(sentence)}});
    try {
        return parse_judgment(ctx.llm.complete(prompt, ctx.params).completion);
    } catch (const Error&) {
        return Judgment::invalid;
    }
}

CorrectionRun run_correction(const DetectionInstance& instance, CorrectionMode mode, const ScoreReport* report,
                             double threshold, PipelineContext& correct_ctx, PipelineContext& judge_ctx) {
    if (!instance.source_bio) {
        throw Error(ErrorCode::Precondition, "instance " + instance.id + " has no source biography to judge against");
    }
    CorrectionRun run;
    run.instance_id = instance.id;
    run.mode = mode;
    run.threshold = threshold;
    run.original_sentences = instance.sentences;
    if (mode != CorrectionMode::baseline) {
        if (report == nullptr) {
            throw Error(ErrorCode::Precondition,
                        std::string(to_string(mode)) + " correction of " + instance.id + " needs a score report");
        }
        run.flagged = flag_hallucinations(*report, mode == CorrectionMode::fact ? FlagLevel::fact : FlagLevel::sentence,
                                          threshold);
    }
    auto output = correct(instance, mode, run.flagged, correct_ctx);
    run.corrected_sentences = std::move(output.sentences);
    run.parse_defects = output.parse_defects;

    std::string full_text;
    for (const auto& s : run.corrected_sentences) {
        if (!full_text.empty()) {
            full_text.push_back(' ');
        }
        full_text += s;
    }
    run.judgments.resize(run.corrected_sentences.size(), Judgment::invalid);
    parallel_for(run.corrected_sentences.size(), judge_ctx.max_parallel, [&](std::size_t i) {
        run.judgments[i] = judge_sentence(run.corrected_sentences[i], full_text, *instance.source_bio, judge_ctx);
    });
    return run;
}

CorrectionReport correction_report(std::span<const Judgment> judgments, std::span<const Judgment> baseline_judgments) {
    auto tally = [](std::span<const Judgment> js) {
        CorrectionReport r;
        for (const auto j : js) {
            switch (j) {
            case Judgment::factual: ++r.factual; break;
            case Judgment::non_factual: ++r.non_factual; break;
            case Judgment::refused: ++r.refused; break;
            case Judgment::invalid: ++r.invalid; break;
            }
        }
        if (r.judged() == 0) {
            throw Error(ErrorCode::EmptyRun, "no judged sentences");
        }
        const auto total = static_cast<double>(r.judged());
        r.proportions = {static_cast<double>(r.factual) / total, static_cast<double>(r.non_factual) / total,
                         static_cast<double>(r.refused) / total};
        return r;
    };
    CorrectionReport report = tally(judgments);
    const CorrectionReport base = tally(baseline_judgments);
    auto delta = [](double p, double b) -> std::optional<double> {
        if (b == 0.0) {
            return std::nullopt;
        }
        return (p - b) / b;
    };
    report.delta_factual = delta(report.proportions.factual, base.proportions.factual);
    report.delta_non_factual = delta(report.proportions.non_factual, base.proportions.non_factual);
    report.delta_refused = delta(report.proportions.refused, base.proportions.refused);
    return report;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string cell(double p, const std::optional<double>& d, bool is_baseline) {
    std::string out = fixed(p, 2);
    if (!is_baseline) {
        if (d) {
            const double pct = *d * 100.0;
            out += " (" + std::string(pct >= 0 ? "+" : "") + fixed(pct, 0) + "%)";
        } else {
            out += " (n/a)";
        }
    }
    return out;
}

} // namespace

nlohmann::json correction_run_to_json(const CorrectionRun& run) {
    nlohmann::json flagged_facts = nlohmann::json::array();
    for (const auto& f : run.flagged.facts) {
        flagged_facts.push_back({{"sentence", f.sentence}, {"fact", f.fact}, {"score", f.score}});
    }
    nlohmann::json judgments = nlohmann::json::array();
    for (const auto j : run.judgments) {
        judgments.push_back(to_string(j));
    }
    return {{"id", run.instance_id},
            {"mode", to_string(run.mode)},
            {"threshold", run.threshold},
            {"original_sentences", run.original_sentences},
            {"flagged_sentences", run.flagged.sentences},
            {"flagged_facts", std::move(flagged_facts)},
            {"corrected_sentences", run.corrected_sentences},
            {"judgments", std::move(judgments)},
            {"parse_defects", run.parse_defects}};
}

nlohmann::json correction_report_to_json(const CorrectionReport& r) {
    return {{"counts",
             {{"factual", r.factual}, {"non_factual", r.non_factual}, {"refused", r.refused}, {"invalid", r.invalid}}},
            {"proportions",
             {{"factual", r.proportions.factual},
              {"non_factual", r.proportions.non_factual},
              {"refused", r.proportions.refused}}},
            {"relative_change",
             {{"factual", opt(r.delta_factual)},
              {"non_factual", opt(r.delta_non_factual)},
              {"refused", opt(r.delta_refused)}}}};
}

std::string render_comparison_table(const std::map<CorrectionMode, CorrectionReport>& reports) {
    std::string out = "level     | factual      | non-factual  | refused      | judged | invalid\n";
    out += "----------+--------------+--------------+--------------+--------+--------\n";
    for (const auto& [mode, r] : reports) {
        const bool base = mode == CorrectionMode::baseline;
        char row[256];
        std::snprintf(row, sizeof row, "%-9s | %-12s | %-12s | %-12s | %6zu | %7zu\n", std::string(to_string(mode)).c_str(),
                      cell(r.proportions.factual, r.delta_factual, base).c_str(),
                      cell(r.proportions.non_factual, r.delta_non_factual, base).c_str(),
                      cell(r.proportions.refused, r.delta_refused, base).c_str(), r.judged(), r.invalid);
        out += row;
    }
    return out;
}

} // namespace fsc
