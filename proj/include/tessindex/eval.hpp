// Copyright 2026-present the tessindex project
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

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tessindex/baselines.hpp"
#include "tessindex/encoding.hpp"
#include "tessindex/types.hpp"

namespace tessindex {

// User-side and item-side factors sharing one latent dimension k. Ids are
// unique within each side; the two sides may reuse ids.
struct FactorSet {
    std::vector<DenseFactor> users;
    std::vector<DenseFactor> items;
    std::size_t k = 0;

    // Throws std::invalid_argument when a side is ragged or repeats an id.
    void validate() const;
};

// I.i.d. standard normal factors. Entry (row, col) comes from the stream
// addressed by (seed, side, row), so any prefix of rows is reproducible
// independent of the other counts.
FactorSet gen_synthetic(std::size_t n_users, std::size_t n_items, std::size_t k,
                        std::uint64_t seed);

// Reads both sides from factor CSV files and checks they agree on k.
FactorSet load_factor_set(const std::string& users_path, const std::string& items_path);

// |true_ids intersect candidates| / |true_ids|. Both inputs must be sorted
// ascending; an empty truth set is a std::domain_error.
double recovery_accuracy(const std::vector<FactorId>& true_ids,
                         const std::vector<FactorId>& candidates);

enum class Method { tessindex, srp, superbit, concomitant, pca_tree };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct BenchParams {
    Method method = Method::tessindex;
    int kappa = 10;
    EncodingConfig encoding;  // tessindex only
    HashScheme hash;          // baselines only; hash.seed is overridden by seed
    std::uint64_t seed = 0;
    int threads = 1;

    void validate(const FactorSet& factors) const;
};

struct PerUserRow {
    FactorId user = 0;
    double accuracy = 0.0;
    double discard = 0.0;
};

// Aggregated benchmark outcome. The histogram covers discard rates with 20
// right-closed bins over [0,1] (bin 0 additionally includes 0), so counts
// always sum to the number of users.
struct BenchReport {
    BenchParams params;
    std::size_t n_users = 0;
    std::size_t n_items = 0;
    std::size_t k = 0;
    std::vector<PerUserRow> per_user;
    double mean_accuracy = 0.0;
    double stddev_accuracy = 0.0;
    double mean_discard = 0.0;
    double stddev_discard = 0.0;
    // Mean over users of 1/(1-eta), eta capped at 1 - 1/N.
    double mean_speedup = 0.0;
    std::array<std::uint32_t, 20> histogram{};
};

// Bin index for one discard rate under the report's histogram convention.
std::size_t histogram_bin(double discard);

// Candidate ids (sorted ascending) for one user factor.
using CandidateFn = std::function<std::vector<FactorId>(const DenseFactor&)>;

// Scores an arbitrary candidate generator: per user, recovery accuracy of
// the generator's candidates against the exact top-kappa by inner product,
// and the discard rate 1 - |candidates| / n_items.
BenchReport bench_with_generator(const FactorSet& factors, const BenchParams& params,
                                 const CandidateFn& generator);

// Builds the method named in params (tessindex inverted index or a bucketed
// hash baseline) and evaluates it with bench_with_generator.
BenchReport run_benchmark(const FactorSet& factors, const BenchParams& params);

// Human-readable report: params, per-user table, aggregates, histogram.
// Byte-stable for a given report.
std::string render_report(const BenchReport& report);

// Machine-readable per-user rows: `user,accuracy,discard`.
std::string per_user_csv(const BenchReport& report);

}  // namespace tessindex
