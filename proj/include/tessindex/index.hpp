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

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "tessindex/types.hpp"

namespace tessindex {

struct QueryConfig {
    int kappa = 10;
};

struct ScoredItem {
    FactorId id = 0;
    double score = 0.0;

    bool operator==(const ScoredItem&) const = default;
};

struct RetrievalResult {
    std::vector<FactorId> candidate_ids;  // ascending
    std::vector<ScoredItem> topk;         // score descending, ties by ascending id
    double discard_rate = 0.0;
};

// Posting lists over embedding indices plus the original dense factors for
// exact rescoring. Built once, immutable afterwards; reads are lock-free.
struct InvertedIndex {
    std::uint32_t dim_p = 0;
    std::vector<std::vector<FactorId>> postings;  // size dim_p, each ascending
    std::vector<DenseFactor> items;               // ascending id
    std::unordered_map<FactorId, std::uint32_t> item_pos;

    std::size_t item_count() const { return items.size(); }
    const DenseFactor& factor_of(FactorId id) const;
};

// Plain sequential inner product. Every scoring path in the library goes
// through this one function so candidate scores and ground-truth scores are
// bit-identical.
double dot_product(std::span<const double> x, std::span<const double> y);

// Items whose embedding is non-zero at index i land in postings[i]; exact
// zeros are skipped, otherwise the posting would match every co-tiled item
// and prune nothing. Throws std::invalid_argument on duplicate ids or
// mismatched embedding dimensions.
InvertedIndex build_index(std::vector<std::pair<DenseFactor, SparseEmbedding>> items);

// Union of postings over the query embedding's non-zero indices.
std::vector<FactorId> retrieve_candidates(const InvertedIndex& idx, const SparseEmbedding& user_emb);

// Exact inner products over the candidate set only; top-kappa with ties
// broken by ascending id. discard_rate = 1 - |candidates| / N.
RetrievalResult score_topk(const DenseFactor& user, std::span<const FactorId> candidates,
                           const InvertedIndex& idx, const QueryConfig& cfg);

// Ground truth: exact top-kappa over every indexed item, same ordering rule.
std::vector<ScoredItem> true_topk(const DenseFactor& user, const InvertedIndex& idx,
                                  const QueryConfig& cfg);

// Shared scan used by true_topk and the benchmark ground truth.
std::vector<ScoredItem> topk_scan(const DenseFactor& user, std::span<const DenseFactor> items,
                                  int kappa);

}  // namespace tessindex
