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

#include <span>
#include <vector>

#include "tessindex/types.hpp"

namespace tessindex {

// Angular distance 1 - x.y / (|x||y|), in [0, 2]. Throws std::domain_error
// on a zero vector and std::invalid_argument on mismatched dimensions.
double angular_distance(std::span<const double> x, std::span<const double> y);

// Exact closest ternary tessellating direction (levels in {-1, 0, 1}),
// O(k log k). Scale invariant in z. Ties in the score maximum go to the
// sparser output; ties between equal-magnitude coordinates go to the lower
// index.
TessVector tess_ternary(std::span<const double> z);
TessVector tess_ternary(const DenseFactor& z);

// Approximate closest D-ary tessellating direction (levels in [-D, D]),
// O(k). Rounds each coordinate of the unit-normalized input to the nearest
// level, halfway cases up. If every coordinate rounds to zero the largest
// coordinate is forced to level +-1, since the all-zero direction is not a
// tessellating vector.
TessVector tess_dary(std::span<const double> z, int base);
TessVector tess_dary(const DenseFactor& z, int base);

// Exhaustive argmin over all non-zero level vectors in [-D, D]^k. Test
// oracle; refuses search spaces beyond ~2^20 candidates. Exact distance ties
// keep the lexicographically smallest level vector; the winner is then
// rescaled to the largest in-range collinear representative, so directions
// that appear multiple times in the level grid have one canonical answer.
TessVector brute_force_tess(std::span<const double> z, int base);
TessVector brute_force_tess(const DenseFactor& z, int base);

// The unit vector a = levels / |levels|.
std::vector<double> tess_unit_vector(const TessVector& a);

// Angular distance from z to the direction a tessellating vector denotes.
double tess_distance(std::span<const double> z, const TessVector& a);

}  // namespace tessindex
