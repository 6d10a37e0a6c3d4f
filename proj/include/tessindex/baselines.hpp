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
#include <string>
#include <unordered_map>
#include <vector>

#include "tessindex/rng.hpp"
#include "tessindex/types.hpp"

namespace tessindex {

// Candidate generators used as comparison points: sign-random-projection
// hashing, its orthogonalized (super-bit) variant, concomitant rank-order
// hashing, and a PCA tree. Each reduces to "bucket items by a code, return
// the query's bucket", boosted by taking the union over T independent tables.

enum class HashKind { srp, superbit, concomitant, pca_tree };

std::string hash_kind_name(HashKind kind);
HashKind hash_kind_from_name(const std::string& name);

struct HashScheme {
    HashKind kind = HashKind::srp;
    // Code width in bits for srp/superbit, tree depth for pca_tree.
    int bits_or_depth = 8;
    // Independent boosting instances whose buckets are unioned.
    int tables = 4;
    // Code alphabet size for concomitant hashing.
    int arity_l = 16;
    std::uint64_t seed = 0;

    // Throws std::invalid_argument on out-of-range parameters.
    void validate(std::size_t k) const;
};

// Dense row-major matrix, just large enough for projection directions.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

using HashCode = std::uint64_t;

// rows x cols of i.i.d. standard normal draws from the given stream.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                       std::uint64_t stream_hi, std::uint64_t stream_lo);

// Bit i of the result is 1 iff hyperplanes.row(i) . z >= 0 (sign of zero is
// taken as positive so every projection maps to exactly one bit).
HashCode srp_code(const std::vector<double>& z, const Matrix& hyperplanes);

// Gaussian directions orthonormalized by Gram-Schmidt in consecutive batches
// of at most k rows; zero-norm residuals are redrawn. Codes are then computed
// with srp_code as usual.
Matrix superbit_hyperplanes(std::size_t k, std::size_t b, std::uint64_t seed,
                            std::uint64_t table);

// Index in [0, l) of the maximal projection; ties go to the lowest index.
HashCode concomitant_code(const std::vector<double>& z, const Matrix& projections);

// Complete binary tree of the given depth. A node at level d (root = 0)
// splits on the (d+1)-th principal eigenvector of the covariance of the items
// that reached it, at the median projection; eigenvectors come from power
// iteration with deflation. Leaves therefore partition the item set.
struct PcaTree {
    std::size_t depth = 0;
    std::size_t k = 0;
    // Internal nodes in heap order (children of i at 2i+1, 2i+2).
    std::vector<std::vector<double>> directions;
    std::vector<double> thresholds;
};

PcaTree pca_tree_build(const std::vector<DenseFactor>& items, std::size_t depth,
                       std::uint64_t seed, std::uint64_t table = 0);

// Leaf id in [0, 2^depth); left child on projection <= threshold.
HashCode pca_tree_leaf(const std::vector<double>& z, const PcaTree& tree);

// Dominant eigenvector of a symmetric PSD matrix after deflating away the
// first `order` eigenpairs, via power iteration started from `rng`. Falls
// back to a basis vector when the deflated matrix is numerically zero.
// Exposed for direct verification against known principal axes.
std::vector<double> principal_eigenvector(const Matrix& cov, std::size_t order, CounterRng& rng);

struct BucketTable {
    std::unordered_map<HashCode, std::vector<FactorId>> buckets;
};

struct BucketIndex {
    HashScheme scheme;
    std::size_t k = 0;
    bool built = false;
    std::vector<Matrix> projections;  // srp / superbit / concomitant, one per table
    std::vector<PcaTree> trees;       // pca_tree, one per table
    std::vector<BucketTable> tables;
};

// Hashes every item into each of scheme.tables independent tables. Bucket
// id lists come out sorted ascending.
BucketIndex build_buckets(const std::vector<DenseFactor>& items, const HashScheme& scheme,
                          std::size_t k);

// Code of z under table `t` of the built index.
HashCode bucket_code(const std::vector<double>& z, const BucketIndex& idx, std::size_t t);

// Union over tables of the items whose code exactly matches the query's,
// sorted ascending. Throws std::logic_error if the index was never built.
std::vector<FactorId> boosted_candidates(const std::vector<double>& z, const BucketIndex& idx);

}  // namespace tessindex
