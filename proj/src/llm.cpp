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

#include "fsc/llm.hpp"

#include <algorithm>
#include <array>
#include <ctime>
#include <fstream>
#include <map>
#include <thread>

#include <openssl/evp.h>

#include "fsc/error.hpp"

namespace fsc {

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::Io, "SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 0xF]);
    }
    return out;
}

std::string_view to_string(BackendKind kind) noexcept {
    switch (kind) {
    case BackendKind::http: return "http";
    case BackendKind::scripted: return "scripted";
    case BackendKind::cache_hit: return "cache-hit";
    }
    return "scripted";
}

namespace {

BackendKind backend_from_string(std::string_view s) {
    if (s == "http") {
        return BackendKind::http;
    }
    if (s == "cache-hit") {
        return BackendKind::cache_hit;
    }
    return BackendKind::scripted;
}

nlohmann::json params_to_json(const GenerationParams& p) {
    nlohmann::json j = {{"temperature", p.temperature}, {"max_tokens", p.max_tokens}, {"model", p.model_id}};
    j["seed"] = p.seed ? nlohmann::json(*p.seed) : nlohmann::json(nullptr);
    return j;
}

GenerationParams params_from_json(const nlohmann::json& j) {
    GenerationParams p;
    p.temperature = j.at("temperature").get<double>();
    p.max_tokens = j.at("max_tokens").get<int>();
    p.model_id = j.at("model").get<std::string>();
    if (j.contains("seed") && !j.at("seed").is_null()) {
        p.seed = j.at("seed").get<std::int64_t>();
    }
    return p;
}

void validate(const std::string& prompt, const GenerationParams& params) {
    if (prompt.empty()) {
        throw Error(ErrorCode::EmptyPrompt, "prompt must be non-empty");
    }
    if (!(params.temperature >= 0.0 && params.temperature <= 2.0)) {
        throw Error(ErrorCode::Precondition, "temperature must lie in [0, 2]");
    }
    if (params.max_tokens <= 0) {
        throw Error(ErrorCode::Precondition, "max_tokens must be positive");
    }
}

} // namespace

std::string cache_key(std::string_view prompt, const GenerationParams& params) {
    nlohmann::json j = params_to_json(params);
    j["prompt"] = std::string(prompt);
    return sha256_hex(j.dump());
}

std::string record_digest(std::string_view key, std::string_view completion) {
    std::string buf;
    buf.reserve(key.size() + completion.size() + 1);
    buf.append(key).push_back('\n');
    buf.append(completion);
    return sha256_hex(buf);
}

nlohmann::json exchange_to_json(const LlmExchange& e) {
    return {{"cache_key", e.cache_key},
            {"prompt", e.prompt},
            {"params", params_to_json(e.params)},
            {"completion", e.completion},
            {"backend", to_string(e.backend)},
            {"timestamp", e.timestamp},
            {"digest", record_digest(e.cache_key, e.completion)}};
}

LlmExchange exchange_from_json(const nlohmann::json& j) {
    LlmExchange e;
    try {
        e.prompt = j.at("prompt").get<std::string>();
        e.params = params_from_json(j.at("params"));
        e.completion = j.at("completion").get<std::string>();
        e.cache_key = j.at("cache_key").get<std::string>();
        e.backend = backend_from_string(j.value("backend", "scripted"));
        e.timestamp = j.value("timestamp", "");
        const auto digest = j.at("digest").get<std::string>();
        if (cache_key(e.prompt, e.params) != e.cache_key) {
            throw Error(ErrorCode::CorruptSession, "cache key does not match prompt and params");
        }
        if (record_digest(e.cache_key, e.completion) != digest) {
            throw Error(ErrorCode::CorruptSession, "completion digest mismatch for key " + e.cache_key);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::CorruptSession, std::string("malformed record: ") + ex.what());
    }
    return e;
}

ScriptedBackend::ScriptedBackend(std::span<const LlmExchange> exchanges) {
    for (const auto& e : exchanges) {
        completions_.insert_or_assign(e.cache_key, e.completion);
    }
}

void ScriptedBackend::add(std::string key, std::string completion) {
    completions_.insert_or_assign(std::move(key), std::move(completion));
}

void ScriptedBackend::add(std::string_view prompt, const GenerationParams& params, std::string completion) {
    add(cache_key(prompt, params), std::move(completion));
}

std::string ScriptedBackend::complete(std::string_view prompt, const GenerationParams&, std::string_view key) {
    const auto it = completions_.find(std::string(key));
    if (it == completions_.end()) {
        std::string head(prompt.substr(0, 80));
        throw Error(ErrorCode::MissingRecording, "no recorded completion for key " + std::string(key) + " (prompt: " +
                                                     head + (prompt.size() > 80 ? "...)" : ")"));
    }
    return it->second;
}

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(*path_);
    if (!in) {
        return;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        try {
            auto e = exchange_from_json(nlohmann::json::parse(line));
            entries_.insert_or_assign(e.cache_key, std::move(e));
        } catch (const std::exception&) {
            ++rejected_;
        }
    }
}

std::optional<std::string> ResponseCache::lookup(const std::string& key) const {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end() || it->second.cache_key != key) {
        return std::nullopt;
    }
    return it->second.completion;
}

void ResponseCache::store(const LlmExchange& exchange) {
    std::unique_lock lock(mutex_);
    if (!entries_.try_emplace(exchange.cache_key, exchange).second) {
        return;
    }
    if (path_) {
        std::ofstream out(*path_, std::ios::app);
        if (!out) {
            throw Error(ErrorCode::Io, "cannot append to cache file " + path_->string());
        }
        out << exchange_to_json(exchange).dump() << '\n';
    }
}

std::size_t ResponseCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::vector<LlmExchange> ResponseCache::exchanges() const {
    std::shared_lock lock(mutex_);
    std::vector<LlmExchange> out;
    out.reserve(entries_.size());
    for (const auto& [key, e] : entries_) {
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.cache_key < b.cache_key; });
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

class LlmClient::Slot {
  public:
    explicit Slot(LlmClient& client) : client_(client) {
        std::unique_lock lock(client_.slots_mutex_);
        client_.slots_cv_.wait(lock, [this] { return client_.in_flight_ < client_.options_.max_in_flight; });
        ++client_.in_flight_;
    }
    ~Slot() {
        {
            std::lock_guard lock(client_.slots_mutex_);
            --client_.in_flight_;
        }
        client_.slots_cv_.notify_one();
    }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

  private:
    LlmClient& client_;
};

LlmClient::LlmClient(std::shared_ptr<LlmBackend> backend, ClientOptions options, std::shared_ptr<ResponseCache> cache)
    : backend_(std::move(backend)), options_(std::move(options)), cache_(std::move(cache)) {
    if (!backend_) {
        throw Error(ErrorCode::Config, "LLM client requires a backend");
    }
    if (options_.max_in_flight == 0) {
        options_.max_in_flight = 1;
    }
    if (!options_.clock) {
        options_.clock = utc_timestamp;
    }
}

std::string LlmClient::call_backend(const std::string& prompt, const GenerationParams& params,
                                    const std::string& key) {
    if (options_.call_budget && budget_used_.fetch_add(1) >= *options_.call_budget) {
        throw Error(ErrorCode::BudgetExceeded, "call budget of " + std::to_string(*options_.call_budget) + " exhausted");
    }
    Slot slot(*this);
    for (int attempt = 0;; ++attempt) {
        try {
            auto completion = backend_->complete(prompt, params, key);
            ++backend_calls_;
            return completion;
        } catch (const Error& e) {
            if (!e.retryable() || attempt >= options_.max_retries) {
                throw;
            }
        }
        std::this_thread::sleep_for(options_.backoff_base * (1 << attempt));
    }
}

LlmExchange LlmClient::complete(const std::string& prompt, const GenerationParams& params) {
    validate(prompt, params);
    LlmExchange e;
    e.prompt = prompt;
    e.params = params;
    e.cache_key = cache_key(prompt, params);
    if (auto hit = cache_ ? cache_->lookup(e.cache_key) : std::nullopt) {
        ++cache_hits_;
        e.completion = std::move(*hit);
        e.backend = BackendKind::cache_hit;
    } else {
        e.completion = call_backend(prompt, params, e.cache_key);
        e.backend = backend_->kind();
    }
    e.timestamp = options_.clock();
    if (cache_ && e.backend != BackendKind::cache_hit) {
        cache_->store(e);
    }
    {
        std::lock_guard lock(log_mutex_);
        log_.push_back(e);
    }
    return e;
}

std::vector<LlmExchange> LlmClient::exchanges() const {
    std::map<std::string, LlmExchange> unique;
    {
        std::lock_guard lock(log_mutex_);
        for (const auto& e : log_) {
            unique.try_emplace(e.cache_key, e);
        }
    }
    std::vector<LlmExchange> out;
    out.reserve(unique.size());
    for (auto& [key, e] : unique) {
        out.push_back(std::move(e));
    }
    return out;
}

void record_session(std::span<const LlmExchange> exchanges, const std::filesystem::path& path) {
    std::map<std::string, const LlmExchange*> unique;
    for (const auto& e : exchanges) {
        unique.try_emplace(e.cache_key, &e);
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write session file " + path.string());
    }
    for (const auto& [key, e] : unique) {
        out << exchange_to_json(*e).dump() << '\n';
    }
}

std::shared_ptr<ScriptedBackend> load_session(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read session file " + path.string());
    }
    std::vector<LlmExchange> exchanges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto parsed = nlohmann::json::parse(line, nullptr, false);
        if (parsed.is_discarded()) {
            throw Error(ErrorCode::CorruptSession, path.string() + ":" + std::to_string(line_no) + ": not JSON");
        }
        exchanges.push_back(exchange_from_json(parsed));
    }
    return std::make_shared<ScriptedBackend>(exchanges);
}

} // namespace fsc
