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

#include "fsc/dot_export.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace fsc {

std::string dot_quote(std::string_view text) {
    std::string out = "\"";
    for (const char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': break;
        default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

namespace {

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string export_dot(const ScoreReport& report, const PassageExtraction& extraction, double threshold) {
    std::string out = "digraph " + dot_quote(extraction.id) + " {\n";
    out += "  rankdir=LR;\n";
    out += "  node [shape=box, style=rounded];\n";

    // node id = normalized entity, label = first raw spelling
    std::map<std::string, std::string> nodes;
    for (const auto& f : extraction.passage_kg) {
        nodes.emplace(f.head.normalized, collapse_whitespace(f.head.raw));
        nodes.emplace(f.tail.normalized, collapse_whitespace(f.tail.raw));
    }
    for (const auto& [id, label] : nodes) {
        out += "  " + dot_quote(id) + " [label=" + dot_quote(label) + "];\n";
    }

    for (const auto& f : extraction.passage_kg) {
        const auto scored = report.find_fact(f);
        const auto relation = collapse_whitespace(f.relation.raw);
        out += "  " + dot_quote(f.head.normalized) + " -> " + dot_quote(f.tail.normalized) + " [";
        if (scored && scored->score) {
            const double s = *scored->score;
            const double width = std::max(kDotMinPenwidth, kDotMaxPenwidth * s);
            out += "label=" + dot_quote(relation + " (" + number(s) + ")");
            out += ", penwidth=" + number(width);
            out += ", color=" + std::string(s > threshold ? "red" : "green");
        } else {
            out += "label=" + dot_quote(relation + " (n/a)");
            out += ", penwidth=1.00, color=gray, style=dashed";
        }
        out += "];\n";
    }
    out += "}\n";
    return out;
}

} // namespace fsc
