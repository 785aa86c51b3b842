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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fsc {

/// Average precision: scores sorted descending, tied scores form one block,
/// AP = sum over blocks of (recall gain) * (precision after the block).
/// Throws LengthMismatch, DegenerateLabels (single class).
double auc_pr(std::span<const double> scores, std::span<const bool> labels);

/// Product-moment correlation. Throws LengthMismatch, Precondition (n < 2),
/// ConstantInput.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson over average ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// `count` uniform draws in [0, 1): mt19937_64 seeded with `seed`, each draw
/// taking the top 53 bits of one output. Identical on every platform.
std::vector<double> random_baseline(std::size_t count, std::uint64_t seed);

} // namespace fsc
