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

#include "tessindex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace tessindex {

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

void check_nonzero(std::span<const double> x, const char* who) {
    for (double v : x) {
        if (v != 0.0) return;
    }
    throw std::domain_error(std::string(who) + ": zero vector has no direction");
}

}  // namespace

double angular_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("angular_distance: dimension mismatch");
    }
    check_nonzero(x, "angular_distance");
    check_nonzero(y, "angular_distance");
    return 1.0 - dot(x, y) / (norm2(x) * norm2(y));
}

TessVector tess_ternary(std::span<const double> z) {
    const std::size_t k = z.size();
    if (k == 0) throw std::invalid_argument("tess_ternary: empty vector");
    check_nonzero(z, "tess_ternary");

    // order of coordinates by descending |z|, stable in the original index
    std::vector<std::uint32_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::abs(z[a]) > std::abs(z[b]);
    });

    // t maximizing sum of the top-t magnitudes over sqrt(t); first t wins ties
    double best_score = 0.0;
    std::size_t best_t = 0;
    double cumsum = 0.0;
    for (std::size_t t = 1; t <= k; ++t) {
        cumsum += std::abs(z[order[t - 1]]);
        double score = cumsum / std::sqrt(static_cast<double>(t));
        if (score > best_score) {
            best_score = score;
            best_t = t;
        }
    }

    TessVector out;
    out.base = 1;
    out.levels.assign(k, 0);
    for (std::size_t j = 0; j < best_t; ++j) {
        std::uint32_t i = order[j];
        out.levels[i] = z[i] > 0.0 ? 1 : -1;
    }
    return out;
}

TessVector tess_ternary(const DenseFactor& z) { return tess_ternary(std::span<const double>(z.values)); }

TessVector tess_dary(std::span<const double> z, int base) {
    if (base < 1) throw std::invalid_argument("tess_dary: base must be >= 1");
    const std::size_t k = z.size();
    if (k == 0) throw std::invalid_argument("tess_dary: empty vector");
    check_nonzero(z, "tess_dary");

    const double inv_norm = 1.0 / norm2(z);
    const double d = static_cast<double>(base);

    TessVector out;
    out.base = base;
    out.levels.assign(k, 0);
    bool all_zero = true;
    for (std::size_t j = 0; j < k; ++j) {
        double w = d * (z[j] * inv_norm);
        double up = std::ceil(w);
        double down = std::floor(w);
        double a_plus = std::abs(w - up);
        double a_minus = std::abs(w - down);
        int level = static_cast<int>(a_plus <= a_minus ? up : down);
        out.levels[j] = level;
        if (level != 0) all_zero = false;
    }

    if (all_zero) {
        // happens only when max |z^j| < 1/(2D); pick the dominant coordinate
        std::size_t best = 0;
        for (std::size_t j = 1; j < k; ++j) {
            if (std::abs(z[j]) > std::abs(z[best])) best = j;
        }
        out.levels[best] = z[best] > 0.0 ? 1 : -1;
    }
    return out;
}

TessVector tess_dary(const DenseFactor& z, int base) {
    return tess_dary(std::span<const double>(z.values), base);
}

TessVector brute_force_tess(std::span<const double> z, int base) {
    if (base < 1) throw std::invalid_argument("brute_force_tess: base must be >= 1");
    const std::size_t k = z.size();
    if (k == 0) throw std::invalid_argument("brute_force_tess: empty vector");
    check_nonzero(z, "brute_force_tess");

    const double levels_per_coord = 2.0 * base + 1.0;
    if (static_cast<double>(k) * std::log2(levels_per_coord) > 20.0) {
        throw std::invalid_argument("brute_force_tess: search space exceeds 2^20 candidates");
    }

    // mixed-radix counter over levels, lexicographically ascending from -D..-D
    std::vector<int> levels(k, -base);
    std::vector<double> cand(k);
    std::vector<int> best_levels;
    double best_dist = 0.0;
    bool have_best = false;

    auto advance = [&]() -> bool {
        std::size_t j = k;
        while (j > 0) {
            --j;
            if (levels[j] < base) {
                ++levels[j];
                return true;
            }
            levels[j] = -base;
        }
        return false;
    };

    do {
        bool nonzero = false;
        for (std::size_t j = 0; j < k; ++j) {
            cand[j] = static_cast<double>(levels[j]);
            nonzero |= levels[j] != 0;
        }
        if (!nonzero) continue;
        // strict < keeps the first (lexicographically smallest) minimizer
        double dist = angular_distance(z, cand);
        if (!have_best || dist < best_dist) {
            best_dist = dist;
            best_levels = levels;
            have_best = true;
        }
    } while (advance());

    // collinear level vectors denote the same tessellating direction; return
    // the largest in-range representative of the winning direction
    int max_abs = 0;
    for (int v : best_levels) max_abs = std::max(max_abs, std::abs(v));
    int scale = base / max_abs;
    for (int& v : best_levels) v *= scale;

    return TessVector{std::move(best_levels), base};
}

TessVector brute_force_tess(const DenseFactor& z, int base) {
    return brute_force_tess(std::span<const double>(z.values), base);
}

std::vector<double> tess_unit_vector(const TessVector& a) {
    std::vector<double> v(a.levels.size());
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = static_cast<double>(a.levels[j]);
        s += v[j] * v[j];
    }
    if (s == 0.0) throw std::domain_error("tess_unit_vector: all-zero levels");
    double inv = 1.0 / std::sqrt(s);
    for (double& x : v) x *= inv;
    return v;
}

double tess_distance(std::span<const double> z, const TessVector& a) {
    std::vector<double> v(a.levels.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = static_cast<double>(a.levels[j]);
    return angular_distance(z, v);
}

}  // namespace tessindex
