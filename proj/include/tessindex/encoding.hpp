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
#include <string>
#include <vector>

#include "tessindex/types.hpp"

namespace tessindex {

enum class Scheme { one_hot, counter };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// How factors become sparse embeddings: tessellation base (1 = ternary),
// permutation scheme, and the pre-tessellation magnitude threshold.
struct EncodingConfig {
    Scheme scheme = Scheme::counter;
    int base = 1;
    int window = 1;  // sliding-window size over the tessellating vector; only 1 shipped
    double threshold = 0.0;

    // Ambient dimension p for factors of dimension k.
    std::uint32_t dim_p(std::size_t k) const;

    void validate(std::size_t k) const;
};

// Block encoding: coordinate t lands at index L*t + (base - level_t) with
// L = 2*base + 1 levels per block, so p = L*k. For the ternary scheme this is
// index 3t for level +1, 3t+1 for 0, 3t+2 for -1.
SparseEmbedding one_hot_encode(const DenseFactor& z, const TessVector& a);

// Counter step for the one-character window: the write cursor jumps to k*j on
// +1, to k*(k+j) on -1, and slides one slot on 0. j is 1-based.
std::uint32_t counter_step(std::uint32_t prev, int level, std::size_t j, std::size_t k);

// Cursor encoding over a ternary tessellating vector; p = 2k^2 + k + 1.
// Within one embedding every cursor position is distinct, and positions
// collide across embeddings only when the tessellating vectors agree from
// the most recent nonzero level through the current coordinate.
SparseEmbedding counter_encode(const DenseFactor& z, const TessVector& a);

// Threshold, tessellate, permute. Coordinates with |z^j| < threshold are
// zeroed before tessellation; stored entry values are the thresholded ones,
// so downstream posting lists skip them. If thresholding wipes out every
// coordinate, the largest one survives.
SparseEmbedding encode(const DenseFactor& z, const EncodingConfig& cfg);

// The thresholded copy of z that encode() works from.
DenseFactor apply_threshold(const DenseFactor& z, double threshold);

// Materialized p-element permutation for the block encoding, as dest[source].
// Sources 0..k-1 are the data coordinates; pad sources k..p-1 fill the unused
// offsets of each block in ascending order. Only defined for one_hot; the
// counter scheme is an index map with no canonical pad placement.
std::vector<std::uint32_t> perm_of(const TessVector& a, const EncodingConfig& cfg);

// Number of discordant pairs between two equal-length permutations.
std::uint64_t kendall_tau(std::span<const std::uint32_t> p1, std::span<const std::uint32_t> p2);

}  // namespace tessindex
