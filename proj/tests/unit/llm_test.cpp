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


#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "fsc/error.hpp"
#include "fsc/llm.hpp"
#include "fsc/parallel.hpp"

using namespace fsc;
namespace fs = std::filesystem;

namespace {

GenerationParams params(double t = 0.0) {
    GenerationParams p;
    p.temperature = t;
    p.model_id = "m";
    p.seed = 7;
    return p;
}

ClientOptions fast_options() {
    ClientOptions o;
    o.backoff_base = std::chrono::milliseconds(1);
    o.clock = [] { return std::string("T"); };
    return o;
}

class FlakyBackend final : public LlmBackend {
  public:
    FlakyBackend(int failures, ErrorCode code) : failures_(failures), code_(code) {}
    std::string complete(std::string_view prompt, const GenerationParams&, std::string_view) override {
        ++calls;
        if (calls <= failures_) {
            throw Error(code_, "down");
        }
        return "echo:" + std::string(prompt);
    }
    [[nodiscard]] BackendKind kind() const noexcept override { return BackendKind::scripted; }
    std::atomic<int> calls{0};

  private:
    int failures_;
    ErrorCode code_;
};

class ConcurrencyProbe final : public LlmBackend {
  public:
    std::string complete(std::string_view prompt, const GenerationParams&, std::string_view) override {
        const int now = ++active;
        int seen = peak.load();
        while (now > seen && !peak.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
        --active;
        return std::string(prompt);
    }
    [[nodiscard]] BackendKind kind() const noexcept override { return BackendKind::scripted; }
    std::atomic<int> active{0};
    std::atomic<int> peak{0};
};

fs::path temp_file(const std::string& name) {
    auto p = fs::temp_directory_path() / ("fsc-llm-" + std::to_string(::getpid()) + "-" + name);
    fs::remove(p);
    return p;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

} // namespace

TEST_CASE("sha256 known vector") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cache key depends on prompt and every parameter") {
    const auto base = cache_key("p", params());
    CHECK(base == cache_key("p", params()));
    CHECK(base.size() == 64);
    CHECK(base != cache_key("q", params()));
    CHECK(base != cache_key("p", params(0.5)));
    auto p = params();
    p.model_id = "other";
    CHECK(base != cache_key("p", p));
    p = params();
    p.max_tokens = 10;
    CHECK(base != cache_key("p", p));
    p = params();
    p.seed.reset();
    CHECK(base != cache_key("p", p));
}

TEST_CASE("exchange json round trip and tamper detection") {
    LlmExchange e;
    e.prompt = "hello";
    e.params = params();
    e.completion = "world";
    e.cache_key = cache_key(e.prompt, e.params);
    e.timestamp = "T";
    auto j = exchange_to_json(e);
    const auto back = exchange_from_json(j);
    CHECK(back.completion == "world");
    CHECK(back.params == e.params);

    auto bad = j;
    bad["completion"] = "tampered";
    CHECK(code_of([&] { (void)exchange_from_json(bad); }) == ErrorCode::CorruptSession);
    bad = j;
    bad["prompt"] = "other";
    CHECK(code_of([&] { (void)exchange_from_json(bad); }) == ErrorCode::CorruptSession);
    bad = j;
    bad.erase("digest");
    CHECK(code_of([&] { (void)exchange_from_json(bad); }) == ErrorCode::CorruptSession);
}

TEST_CASE("scripted backend replays and reports missing recordings") {
    auto backend = std::make_shared<ScriptedBackend>();
    backend->add("known", params(), "answer");
    LlmClient client(backend, fast_options());
    CHECK(client.complete("known", params()).completion == "answer");
    CHECK(code_of([&] { (void)client.complete("unknown", params()); }) == ErrorCode::MissingRecording);
    CHECK(code_of([&] { (void)client.complete("known", params(0.5)); }) == ErrorCode::MissingRecording);
}

TEST_CASE("request validation") {
    auto backend = std::make_shared<ScriptedBackend>();
    LlmClient client(backend, fast_options());
    CHECK(code_of([&] { (void)client.complete("", params()); }) == ErrorCode::EmptyPrompt);
    CHECK(code_of([&] { (void)client.complete("p", params(2.5)); }) == ErrorCode::Precondition);
    auto p = params();
    p.max_tokens = 0;
    CHECK(code_of([&] { (void)client.complete("p", p); }) == ErrorCode::Precondition);
    CHECK(code_of([] { LlmClient c(nullptr); }) == ErrorCode::Config);
}

TEST_CASE("session record and load") {
    const auto path = temp_file("session.jsonl");
    auto backend = std::make_shared<FlakyBackend>(0, ErrorCode::BackendUnreachable);
    LlmClient client(backend, fast_options());
    (void)client.complete("b", params());
    (void)client.complete("a", params());
    (void)client.complete("a", params());
    const auto log = client.exchanges();
    CHECK(log.size() == 2);
    CHECK(log[0].cache_key < log[1].cache_key);
    record_session(log, path);

    LlmClient replay(load_session(path), fast_options());
    CHECK(replay.complete("a", params()).completion == "echo:a");
    CHECK(replay.complete("b", params()).completion == "echo:b");

    std::ofstream(path, std::ios::app) << "{not json\n";
    CHECK(code_of([&] { (void)load_session(path); }) == ErrorCode::CorruptSession);
    fs::remove(path);
    CHECK(code_of([&] { (void)load_session(path); }) == ErrorCode::Io);
}

TEST_CASE("cache serves repeated prompts and persists") {
    const auto path = temp_file("cache.jsonl");
    auto backend = std::make_shared<FlakyBackend>(0, ErrorCode::BackendUnreachable);
    {
        auto cache = std::make_shared<ResponseCache>(path);
        LlmClient client(backend, fast_options(), cache);
        CHECK(client.complete("x", params()).backend == BackendKind::scripted);
        const auto hit = client.complete("x", params());
        CHECK(hit.backend == BackendKind::cache_hit);
        CHECK(hit.completion == "echo:x");
        CHECK(client.backend_calls() == 1);
        CHECK(client.cache_hits() == 1);
        CHECK(client.total_calls() == 2);
    }
    std::ofstream(path, std::ios::app) << "garbage\n";
    auto reloaded = std::make_shared<ResponseCache>(path);
    CHECK(reloaded->size() == 1);
    CHECK(reloaded->rejected_on_load() == 1);
    LlmClient client(backend, fast_options(), reloaded);
    (void)client.complete("x", params());
    CHECK(backend->calls == 1);
    fs::remove(path);
}

TEST_CASE("transient failures are retried") {
    auto backend = std::make_shared<FlakyBackend>(2, ErrorCode::BackendUnreachable);
    LlmClient client(backend, fast_options());
    CHECK(client.complete("p", params()).completion == "echo:p");
    CHECK(backend->calls == 3);
    CHECK(client.backend_calls() == 1);
}

TEST_CASE("retries give up after max_retries") {
    auto backend = std::make_shared<FlakyBackend>(100, ErrorCode::BackendUnreachable);
    auto options = fast_options();
    options.max_retries = 2;
    LlmClient client(backend, options);
    CHECK(code_of([&] { (void)client.complete("p", params()); }) == ErrorCode::BackendUnreachable);
    CHECK(backend->calls == 3);
}

TEST_CASE("malformed responses are not retried") {
    auto backend = std::make_shared<FlakyBackend>(100, ErrorCode::MalformedBackendResponse);
    LlmClient client(backend, fast_options());
    CHECK(code_of([&] { (void)client.complete("p", params()); }) == ErrorCode::MalformedBackendResponse);
    CHECK(backend->calls == 1);
}

TEST_CASE("call budget counts backend calls only") {
    auto backend = std::make_shared<FlakyBackend>(0, ErrorCode::BackendUnreachable);
    auto options = fast_options();
    options.call_budget = 2;
    LlmClient client(backend, options, std::make_shared<ResponseCache>());
    (void)client.complete("a", params());
    (void)client.complete("b", params());
    (void)client.complete("a", params());
    CHECK(code_of([&] { (void)client.complete("c", params()); }) == ErrorCode::BudgetExceeded);
    CHECK(backend->calls == 2);
}

TEST_CASE("in-flight limit holds under parallel load") {
    auto backend = std::make_shared<ConcurrencyProbe>();
    auto options = fast_options();
    options.max_in_flight = 3;
    LlmClient client(backend, options);
    parallel_for(40, 16, [&](std::size_t i) { (void)client.complete("p" + std::to_string(i), params()); });
    CHECK(backend->peak.load() <= 3);
    CHECK(backend->peak.load() >= 1);
    CHECK(client.exchanges().size() == 40);
}

TEST_CASE("timestamps") {
    const auto t = utc_timestamp();
    CHECK(t.size() == 20);
    CHECK(t.back() == 'Z');
    CHECK(t[10] == 'T');
}
