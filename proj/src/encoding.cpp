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

#include "tessindex/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tessindex/geometry.hpp"

namespace tessindex {

std::string scheme_name(Scheme s) {
    return s == Scheme::one_hot ? "one_hot" : "counter";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "one_hot") return Scheme::one_hot;
    if (name == "counter") return Scheme::counter;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::uint32_t EncodingConfig::dim_p(std::size_t k) const {
    validate(k);
    if (scheme == Scheme::one_hot) {
        return static_cast<std::uint32_t>((2 * static_cast<std::size_t>(base) + 1) * k);
    }
    return static_cast<std::uint32_t>(2 * k * k + k + 1);
}

void EncodingConfig::validate(std::size_t k) const {
    if (k < 2) throw std::invalid_argument("encoding: factor dimension must be >= 2");
    if (base < 1) throw std::invalid_argument("encoding: base must be >= 1");
    if (window != 1) throw std::invalid_argument("encoding: only window size 1 is implemented");
    if (threshold < 0.0) throw std::invalid_argument("encoding: threshold must be >= 0");
    if (scheme == Scheme::counter && base != 1) {
        throw std::invalid_argument("encoding: counter scheme requires the ternary base");
    }
    // index arithmetic below stays within uint32
    std::size_t max_index = scheme == Scheme::counter
                                ? 2 * k * k + k
                                : (2 * static_cast<std::size_t>(base) + 1) * k - 1;
    if (max_index >= std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("encoding: dimension too large for 32-bit indices");
    }
}

SparseEmbedding one_hot_encode(const DenseFactor& z, const TessVector& a) {
    const std::size_t k = z.values.size();
    if (a.levels.size() != k) {
        throw std::invalid_argument("one_hot_encode: factor/tessellation dimension mismatch");
    }
    const std::uint32_t block = 2 * static_cast<std::uint32_t>(a.base) + 1;

    SparseEmbedding out;
    out.id = z.id;
    out.dim_p = block * static_cast<std::uint32_t>(k);
    out.entries.reserve(k);
    for (std::size_t t = 0; t < k; ++t) {
        std::uint32_t offset = static_cast<std::uint32_t>(a.base - a.levels[t]);
        out.entries.push_back({block * static_cast<std::uint32_t>(t) + offset, z.values[t]});
    }
    return out;  // block index grows with t, already sorted
}

std::uint32_t counter_step(std::uint32_t prev, int level, std::size_t j, std::size_t k) {
    if (level == 1) return static_cast<std::uint32_t>(k * j);
    if (level == -1) return static_cast<std::uint32_t>(k * (k + j));
    return prev + 1;
}

SparseEmbedding counter_encode(const DenseFactor& z, const TessVector& a) {
    const std::size_t k = z.values.size();
    if (a.levels.size() != k) {
        throw std::invalid_argument("counter_encode: factor/tessellation dimension mismatch");
    }
    if (a.base != 1) {
        throw std::invalid_argument("counter_encode: cursor actions are defined for ternary levels only");
    }

    SparseEmbedding out;
    out.id = z.id;
    out.dim_p = static_cast<std::uint32_t>(2 * k * k + k + 1);
    out.entries.reserve(k);
    std::uint32_t tau = 0;
    for (std::size_t j = 1; j <= k; ++j) {
        tau = counter_step(tau, a.levels[j - 1], j, k);
        out.entries.push_back({tau, z.values[j - 1]});
    }
    // cursor jumps are not monotone (a -1 after a +1 moves it backwards)
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SparseEntry& x, const SparseEntry& y) { return x.index < y.index; });
    return out;
}

DenseFactor apply_threshold(const DenseFactor& z, double threshold) {
    DenseFactor out = z;
    if (threshold <= 0.0) return out;
    bool any = false;
    for (double& v : out.values) {
        if (std::abs(v) < threshold) {
            v = 0.0;
        } else {
            any = true;
        }
    }
    if (!any) {
        // keep the dominant coordinate; an all-zero factor has no tile
        std::size_t best = 0;
        for (std::size_t j = 1; j < z.values.size(); ++j) {
            if (std::abs(z.values[j]) > std::abs(z.values[best])) best = j;
        }
        out.values[best] = z.values[best];
    }
    return out;
}

SparseEmbedding encode(const DenseFactor& z, const EncodingConfig& cfg) {
    cfg.validate(z.values.size());
    DenseFactor zt = apply_threshold(z, cfg.threshold);
    TessVector a = cfg.base == 1 ? tess_ternary(zt) : tess_dary(zt, cfg.base);
    return cfg.scheme == Scheme::one_hot ? one_hot_encode(zt, a) : counter_encode(zt, a);
}

std::vector<std::uint32_t> perm_of(const TessVector& a, const EncodingConfig& cfg) {
    if (cfg.scheme != Scheme::one_hot) {
        throw std::invalid_argument("perm_of: only the block encoding has a canonical full permutation");
    }
    const std::size_t k = a.levels.size();
    const std::uint32_t block = 2 * static_cast<std::uint32_t>(a.base) + 1;
    const std::uint32_t p = block * static_cast<std::uint32_t>(k);

    std::vector<std::uint32_t> perm(p);
    std::uint32_t pad_source = static_cast<std::uint32_t>(k);
    for (std::size_t t = 0; t < k; ++t) {
        std::uint32_t base_index = block * static_cast<std::uint32_t>(t);
        std::uint32_t data_offset = static_cast<std::uint32_t>(a.base - a.levels[t]);
        perm[t] = base_index + data_offset;
        for (std::uint32_t off = 0; off < block; ++off) {
            if (off == data_offset) continue;
            perm[pad_source++] = base_index + off;
        }
    }
    return perm;
}

std::uint64_t kendall_tau(std::span<const std::uint32_t> p1, std::span<const std::uint32_t> p2) {
    if (p1.size() != p2.size()) {
        throw std::invalid_argument("kendall_tau: permutation length mismatch");
    }
    std::uint64_t discordant = 0;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        for (std::size_t j = i + 1; j < p1.size(); ++j) {
            if ((p1[i] < p1[j]) != (p2[i] < p2[j])) ++discordant;
        }
    }
    return discordant;
}

}  // namespace tessindex
