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
#include <vector>

namespace tessindex {

using FactorId = std::uint64_t;

// A dense latent factor. Values keep whatever scale they were learned at;
// nothing downstream requires unit norm.
struct DenseFactor {
    FactorId id = 0;
    std::vector<double> values;
};

// A tessellating direction, stored as unnormalized integer levels in
// [-base, base]. The real vector it denotes is levels/base; the tessellating
// vector itself is that, normalized. base == 1 is the ternary scheme.
struct TessVector {
    std::vector<int> levels;
    int base = 1;

    bool operator==(const TessVector&) const = default;
};

struct SparseEntry {
    std::uint32_t index = 0;
    double value = 0.0;

    bool operator==(const SparseEntry&) const = default;
};

// Sparse embedding phi(z): the k factor values relocated into a p-dimensional
// space. Entries are sorted by index; exact-zero values are kept (the map is
// a permutation, not a compaction).
struct SparseEmbedding {
    FactorId id = 0;
    std::uint32_t dim_p = 0;
    std::vector<SparseEntry> entries;

    bool operator==(const SparseEmbedding&) const = default;
};

}  // namespace tessindex
