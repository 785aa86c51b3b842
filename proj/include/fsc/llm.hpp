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

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace fsc {

/// Hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

struct GenerationParams {
    double temperature = 0.0;
    int max_tokens = 1024;
    std::string model_id;
    std::optional<std::int64_t> seed;

    friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

inline constexpr double kDetectionTemperature = 0.0;
inline constexpr double kCorrectionTemperature = 0.5;

enum class BackendKind { http, scripted, cache_hit };

std::string_view to_string(BackendKind kind) noexcept;

/// One prompt/completion pair with everything needed to replay it.
struct LlmExchange {
    std::string prompt;
    GenerationParams params;
    std::string completion;
    std::string cache_key;
    BackendKind backend = BackendKind::scripted;
    std::string timestamp;
};

/// Stable digest over (prompt, temperature, max_tokens, model_id, seed).
std::string cache_key(std::string_view prompt, const GenerationParams& params);

/// Integrity digest binding a completion to its request key.
std::string record_digest(std::string_view key, std::string_view completion);

nlohmann::json exchange_to_json(const LlmExchange& exchange);

/// Parses a session/cache record and verifies both digests. Throws
/// Error(CorruptSession) on any mismatch or missing field.
LlmExchange exchange_from_json(const nlohmann::json& j);

class LlmBackend {
  public:
    virtual ~LlmBackend() = default;
    virtual std::string complete(std::string_view prompt, const GenerationParams& params, std::string_view key) = 0;
    [[nodiscard]] virtual BackendKind kind() const noexcept = 0;
};

struct HttpBackendConfig {
    /// Full URL of the chat-completions endpoint,
    /// e.g. http://localhost:8000/v1/chat/completions
    std::string endpoint;
    std::string api_key;
    std::chrono::seconds timeout{120};
};

/// OpenAI-compatible chat completions over HTTP(S).
class HttpBackend final : public LlmBackend {
  public:
    explicit HttpBackend(HttpBackendConfig config);

    std::string complete(std::string_view prompt, const GenerationParams& params, std::string_view key) override;
    [[nodiscard]] BackendKind kind() const noexcept override { return BackendKind::http; }

    static nlohmann::json request_body(std::string_view prompt, const GenerationParams& params);
    /// Extracts choices[0].message.content. Throws MalformedBackendResponse.
    static std::string completion_from_response(std::string_view body);

  private:
    HttpBackendConfig config_;
    std::string origin_;
    std::string path_;
};

/// Serves completions by cache key; anything unknown is MissingRecording.
class ScriptedBackend final : public LlmBackend {
  public:
    ScriptedBackend() = default;
    explicit ScriptedBackend(std::span<const LlmExchange> exchanges);

    void add(std::string key, std::string completion);
    void add(std::string_view prompt, const GenerationParams& params, std::string completion);
    [[nodiscard]] std::size_t size() const noexcept { return completions_.size(); }

    std::string complete(std::string_view prompt, const GenerationParams& params, std::string_view key) override;
    [[nodiscard]] BackendKind kind() const noexcept override { return BackendKind::scripted; }

  private:
    std::unordered_map<std::string, std::string> completions_;
};

/// Append-only JSON-lines store keyed by cache key. Concurrent lookups,
/// serialized writes. Records whose digests fail verification are ignored
/// on load and counted.
class ResponseCache {
  public:
    ResponseCache() = default;
    explicit ResponseCache(std::filesystem::path path);

    [[nodiscard]] std::optional<std::string> lookup(const std::string& key) const;
    void store(const LlmExchange& exchange);
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::size_t rejected_on_load() const noexcept { return rejected_; }
    [[nodiscard]] std::vector<LlmExchange> exchanges() const;

  private:
    std::optional<std::filesystem::path> path_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, LlmExchange> entries_;
    std::size_t rejected_ = 0;
};

struct ClientOptions {
    std::size_t max_in_flight = 8;
    std::optional<std::size_t> call_budget;
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{250};
    /// Timestamp source; defaults to UTC wall clock in ISO-8601.
    std::function<std::string()> clock;
};

/// Front door for every model call: precondition checks, cache, retries,
/// budget, in-flight limit, and the audit trail.
class LlmClient {
  public:
    explicit LlmClient(std::shared_ptr<LlmBackend> backend, ClientOptions options = {},
                       std::shared_ptr<ResponseCache> cache = nullptr);

    LlmExchange complete(const std::string& prompt, const GenerationParams& params);

    /// Every exchange so far, sorted by cache key and deduplicated.
    [[nodiscard]] std::vector<LlmExchange> exchanges() const;
    [[nodiscard]] std::size_t backend_calls() const noexcept { return backend_calls_.load(); }
    [[nodiscard]] std::size_t cache_hits() const noexcept { return cache_hits_.load(); }
    [[nodiscard]] std::size_t total_calls() const noexcept { return backend_calls() + cache_hits(); }

  private:
    class Slot;

    std::string call_backend(const std::string& prompt, const GenerationParams& params, const std::string& key);

    std::shared_ptr<LlmBackend> backend_;
    ClientOptions options_;
    std::shared_ptr<ResponseCache> cache_;

    std::mutex slots_mutex_;
    std::condition_variable slots_cv_;
    std::size_t in_flight_ = 0;

    std::atomic<std::size_t> backend_calls_{0};
    std::atomic<std::size_t> cache_hits_{0};
    std::atomic<std::size_t> budget_used_{0};

    mutable std::mutex log_mutex_;
    std::vector<LlmExchange> log_;
};

/// Writes one JSON record per line, sorted by cache key, deduplicated.
void record_session(std::span<const LlmExchange> exchanges, const std::filesystem::path& path);

/// Throws Error(CorruptSession) on a bad record, Error(Io) on a missing file.
std::shared_ptr<ScriptedBackend> load_session(const std::filesystem::path& path);

std::string utc_timestamp();

} // namespace fsc
