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

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "test_util.hpp"

using namespace tessindex;
using namespace tessindex::testutil;

namespace {
constexpr double kTol = 1e-12;
}

TEST_CASE("angular_distance basics") {
    CHECK(angular_distance(std::vector{1.0, 0.0}, std::vector{1.0, 0.0}) == 0.0);
    CHECK(angular_distance(std::vector{1.0, 0.0}, std::vector{-1.0, 0.0}) == 2.0);

    // hand oracle: dot = 0.6, |x| = 1, |y| = 1
    double d = angular_distance(std::vector{1.0, 0.0}, std::vector{0.6, 0.8});
    CHECK(d == doctest::Approx(1.0 - 0.6).epsilon(kTol));

    CHECK_THROWS_AS(angular_distance(std::vector{0.0, 0.0}, std::vector{1.0, 0.0}),
                    std::domain_error);
    CHECK_THROWS_AS(angular_distance(std::vector{1.0, 0.0}, std::vector{0.0, 0.0}),
                    std::domain_error);
    CHECK_THROWS_AS(angular_distance(std::vector{1.0, 0.0}, std::vector{1.0, 0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("tess_ternary pinned examples") {
    CHECK(tess_ternary(std::vector{1.0, 0.0}).levels == std::vector{1, 0});

    // scaled cumulative sums: 0.8 vs 1.4/sqrt(2); the second wins
    CHECK(tess_ternary(std::vector{0.6, 0.8}).levels == std::vector{1, 1});
    // cross-check against the exhaustive oracle by distance
    {
        std::vector<double> z{0.6, 0.8};
        TessVector fast = tess_ternary(z);
        TessVector brute = brute_force_tess(z, 1);
        CHECK(tess_distance(z, fast) == doctest::Approx(tess_distance(z, brute)).epsilon(kTol));
        CHECK(fast.levels == brute.levels);
    }

    // unnormalized input; z_s = [0.9806, 0.8321] after normalization
    CHECK(tess_ternary(std::vector{5.0, -1.0}).levels == std::vector{1, 0});

    CHECK_THROWS_AS(tess_ternary(std::vector{0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("tess_ternary output is a valid ternary tessellating vector") {
    CounterRng rng(3, kTestStream, 0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> z = random_unit(rng, 6);
        TessVector a = tess_ternary(z);
        CHECK(a.base == 1);
        bool any = false;
        for (int l : a.levels) {
            CHECK(l >= -1);
            CHECK(l <= 1);
            if (l != 0) any = true;
        }
        CHECK(any);
    }
}

TEST_CASE("tess_ternary matches the exhaustive oracle in distance") {
    for (std::size_t k = 2; k <= 6; ++k) {
        CounterRng rng(11, kTestStream, k);
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> z = random_unit(rng, k);
            double fast = tess_distance(z, tess_ternary(z));
            double brute = tess_distance(z, brute_force_tess(z, 1));
            CHECK(std::abs(fast - brute) <= kTol);
        }
    }
}

TEST_CASE("tess_ternary is scale invariant") {
    CounterRng rng(5, kTestStream, 1);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> z = random_unit(rng, 5);
        TessVector base = tess_ternary(z);
        for (double c : {1e-6, 0.5, 3.0, 1e6}) {
            std::vector<double> scaled = z;
            for (double& x : scaled) x *= c;
            CHECK(tess_ternary(scaled).levels == base.levels);
        }
    }
}

TEST_CASE("tess_dary pinned examples") {
    CHECK(tess_dary(std::vector{1.0, 0.0}, 2).levels == std::vector{2, 0});

    // Dz = [1.2, 1.6]: 1.2 rounds down, 1.6 rounds up
    TessVector a = tess_dary(std::vector{0.6, 0.8}, 2);
    CHECK(a.levels == std::vector{1, 2});
    CHECK(a.base == 2);
    std::vector<double> unit = tess_unit_vector(a);
    CHECK(unit[0] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(kTol));
    CHECK(unit[1] == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(kTol));

    // near-tie from above: 2 * 0.75 / |z| is just over 1.5
    CHECK(tess_dary(std::vector{0.75, 0.6614}, 2).levels[0] == 2);
    // float-exact tie: |z| rounds to exactly 1, so D z^1 = 1.5 and only the
    // ties-up branch yields level 2 instead of 1
    CHECK(tess_dary(std::vector{0.75, 0.6614378277661477}, 2).levels[0] == 2);

    CHECK_THROWS_AS(tess_dary(std::vector{0.0, 0.0}, 2), std::domain_error);
    CHECK_THROWS_AS(tess_dary(std::vector{1.0, 0.0}, 0), std::invalid_argument);
}

TEST_CASE("tess_dary all-zero fallback keeps the dominant coordinate") {
    // k > 4D^2: every unit coordinate can sit below the rounding cutoff 1/(2D)
    std::size_t k = 5;
    std::vector<double> z(k, 1.0);
    TessVector a = tess_dary(z, 1);
    std::vector<int> expect(k, 0);
    expect[0] = 1;  // equal magnitudes: lowest index wins
    CHECK(a.levels == expect);

    for (double& x : z) x = -1.0;
    CHECK(tess_dary(z, 1).levels[0] == -1);
}

TEST_CASE("tess_dary never beats the exhaustive optimum and stays within the bound") {
    for (std::size_t k = 2; k <= 3; ++k) {
        for (int D = 2; D <= 3; ++D) {
            CounterRng rng(17, kTestStream, k * 100 + static_cast<std::size_t>(D));
            for (int rep = 0; rep < 50; ++rep) {
                std::vector<double> z = random_unit(rng, k);
                double approx = tess_distance(z, tess_dary(z, D));
                double exact = tess_distance(z, brute_force_tess(z, D));
                CHECK(approx - exact >= -kTol);
                CHECK(approx - exact <=
                      4.0 * static_cast<double>(k) / (static_cast<double>(D) * D));
            }
        }
    }
}

TEST_CASE("brute_force_tess pinned examples") {
    CHECK(brute_force_tess(std::vector{0.6, 0.8}, 1).levels == std::vector{1, 1});
    for (int D : {1, 2, 3}) {
        CHECK(brute_force_tess(std::vector{1.0, 0.0, 0.0}, D).levels ==
              std::vector{D, 0, 0});
    }
    // must agree with the fast exact path
    std::vector<double> z{0.9806, -0.1961};
    CHECK(brute_force_tess(z, 1).levels == std::vector{1, 0});
    CHECK(brute_force_tess(z, 1).levels == tess_ternary(z).levels);

    // (2*4+1)^8 blows the enumeration budget
    CHECK_THROWS_AS(brute_force_tess(std::vector<double>(8, 0.5), 4), std::invalid_argument);
}

TEST_CASE("ternary nearest-neighbor distance law, exhaustive at k = 4") {
    auto levels = all_ternary(4);
    REQUIRE(levels.size() == 80);
    std::vector<std::vector<double>> units;
    units.reserve(levels.size());
    for (const auto& l : levels) {
        TessVector a;
        a.levels = l;
        a.base = 1;
        units.push_back(tess_unit_vector(a));
    }
    for (std::size_t i = 0; i < units.size(); ++i) {
        double nn = 3.0;
        for (std::size_t j = 0; j < units.size(); ++j) {
            if (j == i) continue;
            nn = std::min(nn, angular_distance(units[i], units[j]));
        }
        std::size_t t = 0;
        for (int l : levels[i]) t += l != 0;
        // a vector using every coordinate has no superset neighbor, so its
        // closest neighbor drops one level instead
        double t_eff = static_cast<double>(std::min(t, std::size_t{3}));
        double law = 1.0 - std::sqrt(t_eff / (t_eff + 1.0));
        CHECK(std::abs(nn - law) <= kTol);
    }
}

TEST_CASE("tess_unit_vector and tess_distance agree with angular_distance") {
    TessVector a;
    a.levels = {1, 0, -1};
    a.base = 1;
    std::vector<double> unit = tess_unit_vector(a);
    CHECK(norm(unit) == doctest::Approx(1.0).epsilon(kTol));
    std::vector<double> z{0.3, -0.2, 0.4};
    CHECK(tess_distance(z, a) == doctest::Approx(angular_distance(z, unit)).epsilon(kTol));
}
