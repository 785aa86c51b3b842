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

#include <httplib.h>

#include "fsc/error.hpp"
#include "fsc/llm.hpp"

namespace fsc {

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    const auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::Config, "endpoint must include a scheme: " + config_.endpoint);
    }
    const auto path_start = config_.endpoint.find('/', scheme_end + 3);
    origin_ = config_.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/v1/chat/completions" : config_.endpoint.substr(path_start);
}

nlohmann::json HttpBackend::request_body(std::string_view prompt, const GenerationParams& params) {
    nlohmann::json body = {
        {"model", params.model_id},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", std::string(prompt)}}})},
        {"temperature", params.temperature},
        {"max_tokens", params.max_tokens},
    };
    if (params.seed) {
        body["seed"] = *params.seed;
    }
    return body;
}

std::string HttpBackend::completion_from_response(std::string_view body) {
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) {
        throw Error(ErrorCode::MalformedBackendResponse, "response body is not JSON");
    }
    try {
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (content.is_null()) {
            return {};
        }
        return content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedBackendResponse, std::string("missing choices[0].message.content: ") + e.what());
    }
}

std::string HttpBackend::complete(std::string_view prompt, const GenerationParams& params, std::string_view) {
    httplib::Client client(origin_);
    const auto timeout = static_cast<time_t>(config_.timeout.count());
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    }
    auto res = client.Post(path_, headers, request_body(prompt, params).dump(), "application/json");
    if (!res) {
        throw Error(ErrorCode::BackendUnreachable, origin_ + ": " + httplib::to_string(res.error()));
    }
    if (res->status == 429 || res->status >= 500) {
        throw Error(ErrorCode::BackendUnreachable, origin_ + " returned HTTP " + std::to_string(res->status));
    }
    if (res->status != 200) {
        throw Error(ErrorCode::MalformedBackendResponse,
                    origin_ + " returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    return completion_from_response(res->body);
}

} // namespace fsc
