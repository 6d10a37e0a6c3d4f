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

#include "tessindex/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tessindex {

namespace {

constexpr double kEigenTolerance = 1e-9;
constexpr int kEigenMaxIters = 1000;

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

// Median of the values in-place; empty input maps to 0 so queries landing in
// a region no item reached still take a well-defined branch.
double median_inplace(std::vector<double>& v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct TreeBuilder {
    const std::vector<DenseFactor>& items;
    std::size_t depth;
    std::size_t k;
    CounterRng& rng;
    PcaTree& tree;

    Matrix covariance(const std::vector<std::uint32_t>& members) const {
        Matrix cov(k, k);
        if (members.size() < 2) return cov;
        std::vector<double> mean(k, 0.0);
        for (std::uint32_t m : members) {
            for (std::size_t j = 0; j < k; ++j) mean[j] += items[m].values[j];
        }
        for (double& m : mean) m /= static_cast<double>(members.size());
        for (std::uint32_t m : members) {
            for (std::size_t a = 0; a < k; ++a) {
                double da = items[m].values[a] - mean[a];
                for (std::size_t b = a; b < k; ++b) {
                    cov.at(a, b) += da * (items[m].values[b] - mean[b]);
                }
            }
        }
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a; b < k; ++b) {
                cov.at(a, b) /= static_cast<double>(members.size());
                cov.at(b, a) = cov.at(a, b);
            }
        }
        return cov;
    }

    void split(std::size_t node, std::size_t level, std::vector<std::uint32_t> members) {
        if (level == depth) return;
        Matrix cov = covariance(members);
        std::vector<double> dir = principal_eigenvector(cov, level, rng);

        std::vector<double> proj(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            proj[i] = dot(items[members[i]].values.data(), dir.data(), k);
        }
        std::vector<double> sorted = proj;
        double threshold = median_inplace(sorted);

        std::vector<std::uint32_t> left, right;
        for (std::size_t i = 0; i < members.size(); ++i) {
            (proj[i] <= threshold ? left : right).push_back(members[i]);
        }
        tree.directions[node] = std::move(dir);
        tree.thresholds[node] = threshold;
        members.clear();
        members.shrink_to_fit();
        split(2 * node + 1, level + 1, std::move(left));
        split(2 * node + 2, level + 1, std::move(right));
    }
};

}  // namespace

std::string hash_kind_name(HashKind kind) {
    switch (kind) {
        case HashKind::srp: return "srp";
        case HashKind::superbit: return "superbit";
        case HashKind::concomitant: return "concomitant";
        case HashKind::pca_tree: return "pca_tree";
    }
    throw std::invalid_argument("unknown hash kind");
}

HashKind hash_kind_from_name(const std::string& name) {
    if (name == "srp") return HashKind::srp;
    if (name == "superbit") return HashKind::superbit;
    if (name == "concomitant") return HashKind::concomitant;
    if (name == "pca_tree") return HashKind::pca_tree;
    throw std::invalid_argument("unknown hash kind '" + name + "'");
}

void HashScheme::validate(std::size_t k) const {
    if (bits_or_depth < 1) throw std::invalid_argument("bits_or_depth must be >= 1");
    if (tables < 1) throw std::invalid_argument("tables must be >= 1");
    if (kind == HashKind::concomitant && arity_l < 2) {
        throw std::invalid_argument("concomitant arity_l must be >= 2");
    }
    if ((kind == HashKind::srp || kind == HashKind::superbit) && bits_or_depth > 64) {
        throw std::invalid_argument("codes wider than 64 bits are not supported");
    }
    if (kind == HashKind::pca_tree && static_cast<std::size_t>(bits_or_depth) > k) {
        throw std::invalid_argument("pca_tree depth exceeds available eigenvectors");
    }
    if (kind == HashKind::pca_tree && bits_or_depth > 62) {
        throw std::invalid_argument("pca_tree depth too large for a 64-bit leaf id");
    }
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                       std::uint64_t stream_hi, std::uint64_t stream_lo) {
    CounterRng rng(seed, stream_hi, stream_lo);
    Matrix m(rows, cols);
    for (double& v : m.data) v = rng.next_gaussian();
    return m;
}

HashCode srp_code(const std::vector<double>& z, const Matrix& hyperplanes) {
    if (z.size() != hyperplanes.cols) {
        throw std::invalid_argument("factor dimension does not match hyperplanes");
    }
    HashCode code = 0;
    for (std::size_t i = 0; i < hyperplanes.rows; ++i) {
        if (dot(hyperplanes.row(i), z.data(), z.size()) >= 0.0) {
            code |= HashCode{1} << i;
        }
    }
    return code;
}

Matrix superbit_hyperplanes(std::size_t k, std::size_t b, std::uint64_t seed,
                            std::uint64_t table) {
    CounterRng rng(seed, streams::kSuperBit, table);
    Matrix m(b, k);
    std::vector<double> row(k);
    for (std::size_t i = 0; i < b; ++i) {
        std::size_t batch_start = (i / k) * k;  // orthogonalize within batches of k rows
        for (;;) {
            for (double& v : row) v = rng.next_gaussian();
            for (std::size_t j = batch_start; j < i; ++j) {
                double c = dot(row.data(), m.row(j), k);
                for (std::size_t d = 0; d < k; ++d) row[d] -= c * m.at(j, d);
            }
            double norm = std::sqrt(dot(row.data(), row.data(), k));
            if (norm > 1e-12) {
                for (std::size_t d = 0; d < k; ++d) m.at(i, d) = row[d] / norm;
                break;
            }
            // degenerate residual: redraw this row
        }
    }
    return m;
}

HashCode concomitant_code(const std::vector<double>& z, const Matrix& projections) {
    if (z.size() != projections.cols) {
        throw std::invalid_argument("factor dimension does not match projections");
    }
    if (projections.rows == 0) throw std::invalid_argument("empty projection matrix");
    std::size_t best = 0;
    double best_val = dot(projections.row(0), z.data(), z.size());
    for (std::size_t i = 1; i < projections.rows; ++i) {
        double v = dot(projections.row(i), z.data(), z.size());
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    return best;
}

std::vector<double> principal_eigenvector(const Matrix& cov, std::size_t order, CounterRng& rng) {
    if (cov.rows != cov.cols) throw std::invalid_argument("covariance must be square");
    const std::size_t k = cov.rows;
    if (order >= k) throw std::invalid_argument("eigenvector order exceeds dimension");

    Matrix work = cov;
    std::vector<double> v(k), next(k);
    for (std::size_t found = 0; found <= order; ++found) {
        for (double& x : v) x = rng.next_gaussian();
        double norm = std::sqrt(dot(v.data(), v.data(), k));
        for (double& x : v) x /= norm;

        double lambda = 0.0;
        bool converged = false;
        for (int iter = 0; iter < kEigenMaxIters && !converged; ++iter) {
            for (std::size_t i = 0; i < k; ++i) next[i] = dot(work.row(i), v.data(), k);
            double next_norm = std::sqrt(dot(next.data(), next.data(), k));
            if (next_norm < 1e-300) {
                // deflated matrix is numerically zero: any remaining direction
                // is an eigenvector; pick a fixed basis vector
                std::fill(v.begin(), v.end(), 0.0);
                v[found % k] = 1.0;
                lambda = 0.0;
                break;
            }
            double delta = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                next[i] /= next_norm;
                delta = std::max(delta, std::abs(next[i] - v[i]));
            }
            v = next;
            lambda = next_norm;
            converged = delta < kEigenTolerance;
        }
        if (found < order) {
            for (std::size_t a = 0; a < k; ++a) {
                for (std::size_t b = 0; b < k; ++b) {
                    work.at(a, b) -= lambda * v[a] * v[b];
                }
            }
        }
    }

    // fix the sign so the output does not depend on the iteration start
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < k; ++i) {
        if (std::abs(v[i]) > std::abs(v[pivot])) pivot = i;
    }
    if (v[pivot] < 0.0) {
        for (double& x : v) x = -x;
    }
    return v;
}

PcaTree pca_tree_build(const std::vector<DenseFactor>& items, std::size_t depth,
                       std::uint64_t seed, std::uint64_t table) {
    if (items.empty()) throw std::invalid_argument("cannot build a tree over no items");
    const std::size_t k = items.front().values.size();
    for (const DenseFactor& f : items) {
        if (f.values.size() != k) throw std::invalid_argument("items disagree on dimension");
    }
    if (depth > k) throw std::invalid_argument("pca_tree depth exceeds available eigenvectors");

    PcaTree tree;
    tree.depth = depth;
    tree.k = k;
    std::size_t internal = (std::size_t{1} << depth) - 1;
    tree.directions.resize(internal);
    tree.thresholds.resize(internal, 0.0);
    if (depth == 0) return tree;

    CounterRng rng(seed, streams::kPcaTree, table);
    std::vector<std::uint32_t> all(items.size());
    for (std::uint32_t i = 0; i < items.size(); ++i) all[i] = i;
    TreeBuilder builder{items, depth, k, rng, tree};
    builder.split(0, 0, std::move(all));
    return tree;
}

HashCode pca_tree_leaf(const std::vector<double>& z, const PcaTree& tree) {
    if (z.size() != tree.k) throw std::invalid_argument("factor dimension does not match tree");
    std::size_t node = 0;
    HashCode leaf = 0;
    for (std::size_t level = 0; level < tree.depth; ++level) {
        double p = dot(z.data(), tree.directions[node].data(), tree.k);
        int bit = p <= tree.thresholds[node] ? 0 : 1;
        leaf = (leaf << 1) | static_cast<HashCode>(bit);
        node = 2 * node + 1 + static_cast<std::size_t>(bit);
    }
    return leaf;
}

BucketIndex build_buckets(const std::vector<DenseFactor>& items, const HashScheme& scheme,
                          std::size_t k) {
    scheme.validate(k);
    for (const DenseFactor& f : items) {
        if (f.values.size() != k) throw std::invalid_argument("item dimension mismatch");
    }

    BucketIndex idx;
    idx.scheme = scheme;
    idx.k = k;
    idx.tables.resize(static_cast<std::size_t>(scheme.tables));

    for (std::size_t t = 0; t < idx.tables.size(); ++t) {
        switch (scheme.kind) {
            case HashKind::srp:
                idx.projections.push_back(gaussian_matrix(
                    static_cast<std::size_t>(scheme.bits_or_depth), k, scheme.seed,
                    streams::kSrp, t));
                break;
            case HashKind::superbit:
                idx.projections.push_back(superbit_hyperplanes(
                    k, static_cast<std::size_t>(scheme.bits_or_depth), scheme.seed, t));
                break;
            case HashKind::concomitant:
                idx.projections.push_back(gaussian_matrix(
                    static_cast<std::size_t>(scheme.arity_l), k, scheme.seed,
                    streams::kConcomitant, t));
                break;
            case HashKind::pca_tree:
                idx.trees.push_back(pca_tree_build(
                    items, static_cast<std::size_t>(scheme.bits_or_depth), scheme.seed, t));
                break;
        }
    }
    idx.built = true;

    for (std::size_t t = 0; t < idx.tables.size(); ++t) {
        for (const DenseFactor& f : items) {
            idx.tables[t].buckets[bucket_code(f.values, idx, t)].push_back(f.id);
        }
        for (auto& [code, ids] : idx.tables[t].buckets) {
            std::sort(ids.begin(), ids.end());
        }
    }
    return idx;
}

HashCode bucket_code(const std::vector<double>& z, const BucketIndex& idx, std::size_t t) {
    if (!idx.built) throw std::logic_error("bucket index was not built");
    if (t >= idx.tables.size()) throw std::invalid_argument("table out of range");
    switch (idx.scheme.kind) {
        case HashKind::srp:
        case HashKind::superbit:
            return srp_code(z, idx.projections[t]);
        case HashKind::concomitant:
            return concomitant_code(z, idx.projections[t]);
        case HashKind::pca_tree:
            return pca_tree_leaf(z, idx.trees[t]);
    }
    throw std::logic_error("unknown hash kind");
}

std::vector<FactorId> boosted_candidates(const std::vector<double>& z, const BucketIndex& idx) {
    if (!idx.built) throw std::logic_error("bucket index was not built");
    std::vector<FactorId> out;
    for (std::size_t t = 0; t < idx.tables.size(); ++t) {
        auto it = idx.tables[t].buckets.find(bucket_code(z, idx, t));
        if (it != idx.tables[t].buckets.end()) {
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace tessindex
