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

#include "tessindex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "tessindex/index.hpp"
#include "tessindex/io.hpp"
#include "test_util.hpp"

using namespace tessindex;
using namespace tessindex::testutil;

TEST_CASE("gen_synthetic determinism and moments") {
    FactorSet a = gen_synthetic(1, 1, 2, 42);
    FactorSet b = gen_synthetic(1, 1, 2, 42);
    CHECK(a.users[0].values == b.users[0].values);
    CHECK(a.items[0].values == b.items[0].values);

    // prefix stability: the first rows do not depend on the counts
    FactorSet big = gen_synthetic(3, 5, 2, 42);
    CHECK(big.users[0].values == a.users[0].values);
    CHECK(big.items[0].values == a.items[0].values);

    CHECK_THROWS_AS(gen_synthetic(0, 1, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(gen_synthetic(1, 0, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(gen_synthetic(1, 1, 0, 0), std::invalid_argument);

    // law of large numbers over 1e6 entries
    FactorSet mass = gen_synthetic(2000, 2000, 250, 7);
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (const auto& side : {mass.users, mass.items}) {
        for (const DenseFactor& f : side) {
            for (double v : f.values) {
                sum += v;
                sq += v * v;
                ++n;
            }
        }
    }
    double mean = sum / static_cast<double>(n);
    double var = sq / static_cast<double>(n) - mean * mean;
    CHECK(n == 1000000);
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("recovery_accuracy pinned examples") {
    CHECK(recovery_accuracy({1, 2}, {1, 3}) == 0.5);
    CHECK(recovery_accuracy({1, 2}, {0, 1, 2, 3}) == 1.0);
    CHECK(recovery_accuracy({1, 2}, {}) == 0.0);
    CHECK_THROWS_AS(recovery_accuracy({}, {1}), std::domain_error);
}

TEST_CASE("histogram_bin is right-closed over 20 bins") {
    CHECK(histogram_bin(0.0) == 0);
    CHECK(histogram_bin(0.05) == 0);
    CHECK(histogram_bin(0.050000001) == 1);
    CHECK(histogram_bin(0.5) == 9);
    CHECK(histogram_bin(0.951) == 19);
    CHECK(histogram_bin(1.0) == 19);
}

TEST_CASE("degenerate candidate generators bound the metrics") {
    FactorSet fs = gen_synthetic(20, 40, 4, 3);
    BenchParams params;
    params.kappa = 5;
    params.threads = 1;

    std::vector<FactorId> all_ids;
    for (const DenseFactor& f : fs.items) all_ids.push_back(f.id);

    BenchReport everything =
        bench_with_generator(fs, params, [&](const DenseFactor&) { return all_ids; });
    CHECK(everything.mean_accuracy == 1.0);
    CHECK(everything.mean_discard == 0.0);
    CHECK(everything.mean_speedup == 1.0);

    BenchReport nothing =
        bench_with_generator(fs, params, [](const DenseFactor&) { return std::vector<FactorId>{}; });
    CHECK(nothing.mean_accuracy == 0.0);
    CHECK(nothing.mean_discard == 1.0);
    // capped at eta = 1 - 1/N: speedup N
    CHECK(nothing.mean_speedup == doctest::Approx(40.0).epsilon(1e-9));

    // histogram mass conservation
    std::size_t total = 0;
    for (std::uint32_t c : nothing.histogram) total += c;
    CHECK(total == fs.users.size());
    CHECK(nothing.histogram[19] == fs.users.size());
}

TEST_CASE("union of candidate sets never hurts accuracy or helps discard") {
    FactorSet fs = gen_synthetic(30, 60, 5, 9);

    BenchParams params;
    params.kappa = 5;
    params.threads = 1;
    params.seed = 9;

    // two deterministic pseudo-methods keyed off the user id
    auto gen_a = [&](const DenseFactor& u) {
        std::vector<FactorId> out;
        for (const DenseFactor& f : fs.items) {
            if ((f.id + u.id) % 3 == 0) out.push_back(f.id);
        }
        return out;
    };
    auto gen_b = [&](const DenseFactor& u) {
        std::vector<FactorId> out;
        for (const DenseFactor& f : fs.items) {
            if ((f.id * 7 + u.id) % 5 < 2) out.push_back(f.id);
        }
        return out;
    };
    auto gen_union = [&](const DenseFactor& u) {
        std::vector<FactorId> a = gen_a(u);
        std::vector<FactorId> b = gen_b(u);
        std::vector<FactorId> out;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    };

    BenchReport ra = bench_with_generator(fs, params, gen_a);
    BenchReport rb = bench_with_generator(fs, params, gen_b);
    BenchReport ru = bench_with_generator(fs, params, gen_union);
    for (std::size_t u = 0; u < fs.users.size(); ++u) {
        CHECK(ru.per_user[u].accuracy >= ra.per_user[u].accuracy);
        CHECK(ru.per_user[u].accuracy >= rb.per_user[u].accuracy);
        CHECK(ru.per_user[u].discard <= ra.per_user[u].discard);
        CHECK(ru.per_user[u].discard <= rb.per_user[u].discard);
        CHECK(ra.per_user[u].accuracy >= 0.0);
        CHECK(ra.per_user[u].accuracy <= 1.0);
        CHECK(ra.per_user[u].discard >= 0.0);
        CHECK(ra.per_user[u].discard <= 1.0);
    }

    // reported speedup equals the per-row recomputation
    double expect = 0.0;
    for (const PerUserRow& r : ra.per_user) {
        double eta = std::min(r.discard, 1.0 - 1.0 / 60.0);
        expect += 1.0 / (1.0 - eta);
    }
    expect /= static_cast<double>(ra.per_user.size());
    CHECK(ra.mean_speedup == expect);
}

TEST_CASE("run_benchmark is deterministic and thread-count independent") {
    FactorSet fs = gen_synthetic(24, 80, 6, 11);
    BenchParams params;
    params.method = Method::tessindex;
    params.kappa = 6;
    params.encoding.scheme = Scheme::counter;
    params.seed = 11;
    params.threads = 1;

    BenchReport a = run_benchmark(fs, params);
    BenchReport b = run_benchmark(fs, params);
    CHECK(render_report(a) == render_report(b));

    params.threads = 4;
    BenchReport c = run_benchmark(fs, params);
    CHECK(render_report(a) == render_report(c));

    // every baseline runs end to end deterministically
    for (Method m : {Method::srp, Method::superbit, Method::concomitant, Method::pca_tree}) {
        BenchParams bp = params;
        bp.method = m;
        bp.hash.bits_or_depth = m == Method::pca_tree ? 4 : 8;
        bp.hash.tables = 2;
        bp.hash.arity_l = 8;
        BenchReport r1 = run_benchmark(fs, bp);
        BenchReport r2 = run_benchmark(fs, bp);
        CHECK(render_report(r1) == render_report(r2));
        CHECK(r1.per_user.size() == fs.users.size());
    }
}

TEST_CASE("run_benchmark validation") {
    FactorSet fs = gen_synthetic(4, 8, 3, 1);
    BenchParams params;
    params.kappa = 0;
    CHECK_THROWS_AS(run_benchmark(fs, params), std::invalid_argument);
    params.kappa = 9;  // more than n_items
    CHECK_THROWS_AS(run_benchmark(fs, params), std::invalid_argument);
    params.kappa = 2;
    params.threads = 0;
    CHECK_THROWS_AS(run_benchmark(fs, params), std::invalid_argument);

    FactorSet bad = fs;
    bad.items[1].id = bad.items[0].id;
    params.threads = 1;
    CHECK_THROWS_AS(run_benchmark(bad, params), std::invalid_argument);
}

TEST_CASE("report rendering carries all sections and parses back") {
    FactorSet fs = gen_synthetic(6, 20, 4, 2);
    BenchParams params;
    params.method = Method::tessindex;
    params.kappa = 3;
    params.seed = 2;
    params.threads = 1;
    BenchReport report = run_benchmark(fs, params);

    std::string text = render_report(report);
    CHECK(text.find("[params]") != std::string::npos);
    CHECK(text.find("[per_user]") != std::string::npos);
    CHECK(text.find("[aggregates]") != std::string::npos);
    CHECK(text.find("[histogram]") != std::string::npos);
    CHECK(text.find("method = tessindex") != std::string::npos);
    CHECK(text.find("n_users = 6") != std::string::npos);

    std::string csv = per_user_csv(report);
    CHECK(csv.rfind("user,accuracy,discard\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows
}

TEST_CASE("load_factor_set reads both sides and validates") {
    namespace fs = std::filesystem;
    std::string users_path = (fs::temp_directory_path() / "tessindex_eval_users.csv").string();
    std::string items_path = (fs::temp_directory_path() / "tessindex_eval_items.csv").string();

    FactorSet gen = gen_synthetic(3, 5, 4, 13);
    save_factors(users_path, gen.users);
    save_factors(items_path, gen.items);
    FactorSet back = load_factor_set(users_path, items_path);
    CHECK(back.k == 4);
    CHECK(back.users.size() == 3);
    CHECK(back.items.size() == 5);
    CHECK(back.users[1].values == gen.users[1].values);

    // sides disagreeing on k are rejected
    save_factors(items_path, gen_synthetic(1, 2, 3, 13).items);
    CHECK_THROWS_AS(load_factor_set(users_path, items_path), std::invalid_argument);

    std::remove(users_path.c_str());
    std::remove(items_path.c_str());
}
