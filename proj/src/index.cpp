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

#include "tessindex/index.hpp"

#include <algorithm>
#include <stdexcept>

namespace tessindex {

const DenseFactor& InvertedIndex::factor_of(FactorId id) const {
    auto it = item_pos.find(id);
    if (it == item_pos.end()) {
        throw std::invalid_argument("InvertedIndex: unknown item id " + std::to_string(id));
    }
    return items[it->second];
}

double dot_product(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("dot_product: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

InvertedIndex build_index(std::vector<std::pair<DenseFactor, SparseEmbedding>> items) {
    InvertedIndex idx;
    if (items.empty()) return idx;

    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first.id < b.first.id; });

    idx.dim_p = items.front().second.dim_p;
    idx.postings.resize(idx.dim_p);
    idx.items.reserve(items.size());
    idx.item_pos.reserve(items.size());

    for (auto& [factor, emb] : items) {
        if (emb.dim_p != idx.dim_p) {
            throw std::invalid_argument("build_index: embeddings disagree on dimension p");
        }
        if (!idx.item_pos.emplace(factor.id, static_cast<std::uint32_t>(idx.items.size())).second) {
            throw std::invalid_argument("build_index: duplicate item id " + std::to_string(factor.id));
        }
        for (const SparseEntry& e : emb.entries) {
            if (e.index >= idx.dim_p) {
                throw std::invalid_argument("build_index: embedding index out of range");
            }
            if (e.value != 0.0) idx.postings[e.index].push_back(factor.id);
        }
        idx.items.push_back(std::move(factor));
    }
    // items were appended in ascending id order, so every list is sorted and
    // duplicate-free already
    return idx;
}

std::vector<FactorId> retrieve_candidates(const InvertedIndex& idx, const SparseEmbedding& user_emb) {
    if (user_emb.dim_p != idx.dim_p) {
        throw std::invalid_argument("retrieve_candidates: query dimension p does not match index");
    }
    std::vector<FactorId> out;
    for (const SparseEntry& e : user_emb.entries) {
        if (e.value == 0.0) continue;
        const auto& list = idx.postings[e.index];
        out.insert(out.end(), list.begin(), list.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// score descending, then id ascending
bool scored_before(const ScoredItem& a, const ScoredItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
}

}  // namespace

std::vector<ScoredItem> topk_scan(const DenseFactor& user, std::span<const DenseFactor> items,
                                  int kappa) {
    if (kappa <= 0) throw std::invalid_argument("topk: kappa must be positive");
    std::vector<ScoredItem> scored;
    scored.reserve(items.size());
    for (const DenseFactor& item : items) {
        scored.push_back({item.id, dot_product(user.values, item.values)});
    }
    std::size_t keep = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(kappa));
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(), scored_before);
    scored.resize(keep);
    return scored;
}

RetrievalResult score_topk(const DenseFactor& user, std::span<const FactorId> candidates,
                           const InvertedIndex& idx, const QueryConfig& cfg) {
    if (cfg.kappa <= 0) throw std::invalid_argument("score_topk: kappa must be positive");

    std::vector<DenseFactor> factors;
    factors.reserve(candidates.size());
    for (FactorId id : candidates) factors.push_back(idx.factor_of(id));

    RetrievalResult res;
    res.candidate_ids.assign(candidates.begin(), candidates.end());
    std::sort(res.candidate_ids.begin(), res.candidate_ids.end());
    res.topk = topk_scan(user, factors, cfg.kappa);
    res.discard_rate = idx.item_count() == 0
                           ? 0.0
                           : 1.0 - static_cast<double>(candidates.size()) /
                                       static_cast<double>(idx.item_count());
    return res;
}

std::vector<ScoredItem> true_topk(const DenseFactor& user, const InvertedIndex& idx,
                                  const QueryConfig& cfg) {
    if (idx.item_count() == 0) throw std::invalid_argument("true_topk: empty index");
    return topk_scan(user, idx.items, cfg.kappa);
}

}  // namespace tessindex
