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

#include "fsc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "fsc/error.hpp"

namespace fsc {

namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    return std::string(s.substr(b, s.find_last_not_of(" \t\r") - b + 1));
}

[[noreturn]] void bad_value(std::string_view what, std::string_view value) {
    throw Error(ErrorCode::Config, "bad value '" + std::string(value) + "' for " + std::string(what));
}

double to_double(std::string_view key, std::string_view v) {
    try {
        std::size_t used = 0;
        const std::string s(v);
        const double d = std::stod(s, &used);
        if (used != s.size()) {
            bad_value(key, v);
        }
        return d;
    } catch (const std::logic_error&) {
        bad_value(key, v);
    }
}

template <typename T>
T to_integer(std::string_view key, std::string_view v) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        bad_value(key, v);
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    bad_value(key, v);
}

std::vector<CorrectionMode> to_modes(std::string_view v) {
    std::vector<CorrectionMode> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        auto comma = v.find(',', pos);
        if (comma == std::string_view::npos) {
            comma = v.size();
        }
        const auto item = trim(v.substr(pos, comma - pos));
        if (!item.empty()) {
            const auto mode = parse_mode(item);
            if (std::find(out.begin(), out.end(), mode) == out.end()) {
                out.push_back(mode);
            }
        }
        pos = comma + 1;
    }
    if (out.empty()) {
        bad_value("modes", v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <typename Parse>
Setter wrap(const char* key, Parse parse) {
    return [key, parse](RunConfig& c, std::string_view v) {
        try {
            parse(c, v);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Config) {
                throw;
            }
            bad_value(key, v);
        }
    };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        t["endpoint"] = [](RunConfig& c, std::string_view v) { c.endpoint = v; };
        t["model"] = [](RunConfig& c, std::string_view v) {
            c.detection_model = c.correction_model = c.judge_model = std::string(v);
        };
        t["detection-model"] = [](RunConfig& c, std::string_view v) { c.detection_model = v; };
        t["correction-model"] = [](RunConfig& c, std::string_view v) { c.correction_model = v; };
        t["judge-model"] = [](RunConfig& c, std::string_view v) { c.judge_model = v; };
        t["detection-temperature"] = [](RunConfig& c, std::string_view v) {
            c.detection_temperature = to_double("detection-temperature", v);
        };
        t["correction-temperature"] = [](RunConfig& c, std::string_view v) {
            c.correction_temperature = to_double("correction-temperature", v);
        };
        t["judge-temperature"] = [](RunConfig& c, std::string_view v) {
            c.judge_temperature = to_double("judge-temperature", v);
        };
        t["max-tokens"] = [](RunConfig& c, std::string_view v) { c.max_tokens = to_integer<int>("max-tokens", v); };
        t["seed"] = [](RunConfig& c, std::string_view v) { c.seed = to_integer<std::int64_t>("seed", v); };
        t["n-samples"] = [](RunConfig& c, std::string_view v) {
            if (v == "all") {
                c.n_samples.reset();
            } else {
                c.n_samples = to_integer<std::size_t>("n-samples", v);
            }
        };
        t["sweep-max"] = [](RunConfig& c, std::string_view v) { c.sweep_max = to_integer<std::size_t>("sweep-max", v); };
        t["scorer"] = wrap("scorer", [](RunConfig& c, std::string_view v) { c.scorer = parse_scorer(v); });
        t["aggregation"] =
            wrap("aggregation", [](RunConfig& c, std::string_view v) { c.aggregation = parse_aggregation(v); });
        t["missing-policy"] =
            wrap("missing-policy", [](RunConfig& c, std::string_view v) { c.missing_policy = parse_missing_policy(v); });
        t["fact-level"] = [](RunConfig& c, std::string_view v) { c.fact_level = to_bool("fact-level", v); };
        t["fact-threshold"] = [](RunConfig& c, std::string_view v) {
            c.fact_threshold = to_double("fact-threshold", v);
        };
        t["sentence-threshold"] = [](RunConfig& c, std::string_view v) {
            c.sentence_threshold = to_double("sentence-threshold", v);
        };
        t["dot-threshold"] = [](RunConfig& c, std::string_view v) { c.dot_threshold = to_double("dot-threshold", v); };
        t["modes"] = wrap("modes", [](RunConfig& c, std::string_view v) { c.modes = to_modes(v); });
        t["prompts-dir"] = [](RunConfig& c, std::string_view v) { c.prompts_dir = std::string(v); };
        t["cache"] = [](RunConfig& c, std::string_view v) { c.cache_path = std::string(v); };
        t["replay"] = [](RunConfig& c, std::string_view v) { c.replay_path = std::string(v); };
        t["record"] = [](RunConfig& c, std::string_view v) { c.record_path = std::string(v); };
        t["out-dir"] = [](RunConfig& c, std::string_view v) { c.out_dir = std::string(v); };
        t["max-in-flight"] = [](RunConfig& c, std::string_view v) {
            c.max_in_flight = to_integer<std::size_t>("max-in-flight", v);
        };
        t["call-budget"] = [](RunConfig& c, std::string_view v) {
            if (v == "none") {
                c.call_budget.reset();
            } else {
                c.call_budget = to_integer<std::size_t>("call-budget", v);
            }
        };
        t["max-retries"] = [](RunConfig& c, std::string_view v) { c.max_retries = to_integer<int>("max-retries", v); };
        t["timeout"] = [](RunConfig& c, std::string_view v) {
            c.timeout = std::chrono::seconds(to_integer<long>("timeout", v));
        };
        t["quiet"] = [](RunConfig& c, std::string_view v) { c.quiet = to_bool("quiet", v); };
        return t;
    }();
    return table;
}

std::string kebab(std::string_view key) {
    std::string out(key);
    std::replace(out.begin(), out.end(), '_', '-');
    return out;
}

void check_range(std::string_view what, double v, double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
        throw Error(ErrorCode::Config, std::string(what) + " must lie in [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "], got " + std::to_string(v));
    }
}

} // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters()) {
            k.push_back(name);
        }
        return k;
    }();
    return keys;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    const auto name = kebab(key);
    if (name == "api-key") {
        throw Error(ErrorCode::Config, "api-key is read from FSC_API_KEY or OPENAI_API_KEY only");
    }
    const auto it = setters().find(name);
    if (it == setters().end()) {
        throw Error(ErrorCode::Config, "unknown setting '" + std::string(key) + "'");
    }
    it->second(config, trim(value));
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Config, "cannot read config file " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const auto body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::Config, path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        try {
            apply_setting(config, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
        } catch (const Error& e) {
            throw Error(ErrorCode::Config, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void apply_environment(RunConfig& config, const std::function<const char*(const char*)>& getenv) {
    for (const char* name : {"FSC_API_KEY", "OPENAI_API_KEY"}) {
        if (const char* v = getenv(name); v != nullptr && *v != '\0') {
            config.api_key = v;
            return;
        }
    }
}

void validate_config(const RunConfig& c) {
    check_range("detection-temperature", c.detection_temperature, 0.0, 2.0);
    check_range("correction-temperature", c.correction_temperature, 0.0, 2.0);
    check_range("judge-temperature", c.judge_temperature, 0.0, 2.0);
    check_range("fact-threshold", c.fact_threshold, 0.0, 1.0);
    check_range("sentence-threshold", c.sentence_threshold, 0.0, 1.0);
    check_range("dot-threshold", c.dot_threshold, 0.0, 1.0);
    if (c.max_tokens <= 0) {
        throw Error(ErrorCode::Config, "max-tokens must be positive");
    }
    if (c.n_samples && *c.n_samples == 0) {
        throw Error(ErrorCode::Config, "n-samples must be positive");
    }
    if (c.sweep_max == 0) {
        throw Error(ErrorCode::Config, "sweep-max must be positive");
    }
    if (c.max_in_flight == 0) {
        throw Error(ErrorCode::Config, "max-in-flight must be positive");
    }
    if (c.max_retries < 0) {
        throw Error(ErrorCode::Config, "max-retries must not be negative");
    }
    if (c.timeout.count() <= 0) {
        throw Error(ErrorCode::Config, "timeout must be positive");
    }
    if (c.detection_model.empty() || c.correction_model.empty() || c.judge_model.empty()) {
        throw Error(ErrorCode::Config, "model ids must not be empty");
    }
    if (!c.replay_path.empty() && !std::filesystem::is_regular_file(c.replay_path)) {
        throw Error(ErrorCode::Config, "replay session not found: " + c.replay_path.string());
    }
    if (!c.prompts_dir.empty() && !std::filesystem::is_directory(c.prompts_dir)) {
        throw Error(ErrorCode::Config, "prompts-dir is not a directory: " + c.prompts_dir.string());
    }
    if (c.replay_path.empty() && c.endpoint.rfind("http://", 0) != 0 && c.endpoint.rfind("https://", 0) != 0) {
        throw Error(ErrorCode::Config, "endpoint must be an http(s) URL: " + c.endpoint);
    }
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json modes = nlohmann::json::array();
    for (const auto m : c.modes) {
        modes.push_back(to_string(m));
    }
    return {{"detection_model", c.detection_model},
            {"correction_model", c.correction_model},
            {"judge_model", c.judge_model},
            {"detection_temperature", c.detection_temperature},
            {"correction_temperature", c.correction_temperature},
            {"judge_temperature", c.judge_temperature},
            {"max_tokens", c.max_tokens},
            {"seed", c.seed},
            {"n_samples", c.n_samples ? nlohmann::json(*c.n_samples) : nlohmann::json(nullptr)},
            {"scorer", to_string(c.scorer)},
            {"aggregation", to_string(c.aggregation)},
            {"missing_policy", to_string(c.missing_policy)},
            {"fact_threshold", c.fact_threshold},
            {"sentence_threshold", c.sentence_threshold},
            {"dot_threshold", c.dot_threshold},
            {"modes", modes}};
}

} // namespace fsc
