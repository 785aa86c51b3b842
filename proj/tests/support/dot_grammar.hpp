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

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fsc::testing {

/// Result of checking text against the Graphviz DOT language grammar
/// (graph, stmt_list, node/edge/attr statements, attribute lists, quoted and
/// unquoted IDs). Subgraphs and ports are rejected since the exporter never
/// writes them.
struct DotParse {
    bool ok = false;
    std::string error;
    bool directed = false;
    struct Edge {
        std::string from;
        std::string to;
        std::map<std::string, std::string> attrs;
    };
    std::vector<Edge> edges;
    std::map<std::string, std::map<std::string, std::string>> nodes;
};

DotParse parse_dot(std::string_view text);

} // namespace fsc::testing
