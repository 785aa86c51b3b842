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

#include "fsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "fsc/error.hpp"

namespace fsc {

namespace {

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(a) + " vs " + std::to_string(b) + " elements");
    }
}

std::vector<std::size_t> order_by(std::span<const double> values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    return idx;
}

} // namespace

double auc_pr(std::span<const double> scores, std::span<const bool> labels) {
    require_same_length(scores.size(), labels.size());
    if (std::any_of(scores.begin(), scores.end(), [](double s) { return std::isnan(s); })) {
        throw Error(ErrorCode::Precondition, "AUC-PR scores must not be NaN");
    }
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    if (positives == 0 || positives == labels.size()) {
        throw Error(ErrorCode::DegenerateLabels, "AUC-PR needs at least one positive and one negative label");
    }
    auto idx = order_by(scores);
    std::reverse(idx.begin(), idx.end());

    double ap = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0;
    std::size_t seen = 0;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
            tp += labels[idx[j]] ? 1 : 0;
            ++j;
        }
        seen += j - i;
        const double recall = static_cast<double>(tp) / static_cast<double>(positives);
        const double precision = static_cast<double>(tp) / static_cast<double>(seen);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return ap;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    require_same_length(xs.size(), ys.size());
    if (xs.size() < 2) {
        throw Error(ErrorCode::Precondition, "correlation needs at least two points");
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(ErrorCode::ConstantInput, "correlation is undefined for constant input");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
    if (std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v); })) {
        throw Error(ErrorCode::Precondition, "cannot rank NaN");
    }
    const auto idx = order_by(values);
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && values[idx[j]] == values[idx[i]]) {
            ++j;
        }
        // positions i..j-1 hold ranks i+1..j
        const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            ranks[idx[k]] = mean_rank;
        }
        i = j;
    }
    return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    require_same_length(xs.size(), ys.size());
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    return pearson(rx, ry);
}

std::vector<double> random_baseline(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(count);
    for (auto& v : out) {
        v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    return out;
}

} // namespace fsc
