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

#include "tessindex/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>

#include "tessindex/encoding.hpp"
#include "tessindex/index.hpp"
#include "test_util.hpp"

using namespace tessindex;
using namespace tessindex::testutil;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("format_double round-trips arbitrary doubles") {
    CounterRng rng(47, kTestStream, 300);
    for (int rep = 0; rep < 1000; ++rep) {
        double v = rng.next_gaussian() * std::pow(10.0, static_cast<double>(rng.next_u64() % 13) - 6.0);
        std::string s = format_double(v);
        double back = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(ec == std::errc());
        REQUIRE(ptr == s.data() + s.size());
        CHECK(back == v);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.5) == "-0.5");
}

TEST_CASE("factor CSV round-trip") {
    std::vector<DenseFactor> factors;
    factors.push_back(make_factor(7, {0.6, 0.8}));
    factors.push_back(make_factor(9, {-1.25, 3e-7}));

    std::string csv = factors_to_csv(factors);
    CHECK(csv.substr(0, 9) == "id,f0,f1\n");

    std::vector<DenseFactor> back = factors_from_csv(csv);
    REQUIRE(back.size() == 2);
    CHECK(back[0].id == 7);
    CHECK(back[0].values == factors[0].values);
    CHECK(back[1].values == factors[1].values);

    // canonical files round-trip byte-wise
    CHECK(factors_to_csv(back) == csv);
}

TEST_CASE("factor CSV parse errors carry the line number") {
    CHECK_THROWS_AS(factors_from_csv("nope,f0\n1,2\n", "x.csv"), ParseError);

    try {
        factors_from_csv("id,f0,f1\n7,0.6,0.8\n8,1,2,3\n", "x.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("x.csv:3") != std::string::npos);
    }

    try {
        factors_from_csv("id,f0\n7,abc\n", "y.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    // duplicate ids
    CHECK_THROWS_AS(factors_from_csv("id,f0\n7,1\n7,2\n"), ParseError);
    // single pinned row
    std::vector<DenseFactor> f = factors_from_csv("id,f0,f1\n7,0.6,0.8\n");
    REQUIRE(f.size() == 1);
    CHECK(f[0].id == 7);
    CHECK(f[0].values == std::vector{0.6, 0.8});
}

TEST_CASE("embedding file round-trip") {
    std::vector<SparseEmbedding> embs;
    SparseEmbedding e;
    e.id = 3;
    e.dim_p = 11;
    e.entries = {{2, 0.6}, {4, -0.8}};
    embs.push_back(e);

    std::string text = embeddings_to_text(embs);
    CHECK(text == "3\t11\t2:0.6,4:-0.8\n");
    std::vector<SparseEmbedding> back = embeddings_from_text(text);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == embs[0]);

    CHECK_THROWS_AS(embeddings_from_text("3\t11\n"), ParseError);
    CHECK_THROWS_AS(embeddings_from_text("3\t11\t4:1,2:1\n"), ParseError);   // not ascending
    CHECK_THROWS_AS(embeddings_from_text("3\t11\t12:1\n"), ParseError);      // out of range
}

TEST_CASE("index snapshot round-trip preserves postings and factors") {
    EncodingConfig cfg;
    cfg.scheme = Scheme::counter;
    CounterRng rng(53, kTestStream, 400);
    std::vector<std::pair<DenseFactor, SparseEmbedding>> items;
    for (FactorId i = 0; i < 25; ++i) {
        DenseFactor f = make_factor(i * 3, random_unit(rng, 4));
        SparseEmbedding emb = encode(f, cfg);
        items.emplace_back(std::move(f), std::move(emb));
    }
    InvertedIndex idx = build_index(std::move(items));

    std::string path = temp_path("tessindex_io_test.tix");
    save_index(path, idx);
    InvertedIndex back = load_index(path);
    std::remove(path.c_str());

    CHECK(back.dim_p == idx.dim_p);
    CHECK(back.item_count() == idx.item_count());
    CHECK(back.postings == idx.postings);
    for (const DenseFactor& f : idx.items) {
        CHECK(back.factor_of(f.id).values == f.values);
    }
}

TEST_CASE("index snapshot rejects corrupted headers and dangling postings") {
    CHECK_THROWS_AS(load_index("/nonexistent/path.tix"), std::runtime_error);

    std::string path = temp_path("tessindex_io_bad.tix");
    write_file(path, "wrong v1 p=6 n=0\nid,f0\n");
    CHECK_THROWS_AS(load_index(path), ParseError);

    write_file(path, "tessindex v1 p=6 n=1\n0:5\nid,f0,f1\n7,1,0\n");
    CHECK_THROWS_AS(load_index(path), ParseError);  // posted id 5 has no factor

    write_file(path, "tessindex v1 p=6 n=2\nid,f0,f1\n7,1,0\n");
    CHECK_THROWS_AS(load_index(path), ParseError);  // header says 2 items, file has 1
    std::remove(path.c_str());
}

TEST_CASE("save/load factors via files") {
    std::string path = temp_path("tessindex_io_factors.csv");
    std::vector<DenseFactor> factors;
    factors.push_back(make_factor(0, {1.0, -2.0, 0.25}));
    save_factors(path, factors);
    std::vector<DenseFactor> back = load_factors(path);
    std::remove(path.c_str());
    REQUIRE(back.size() == 1);
    CHECK(back[0].values == factors[0].values);

    CHECK_THROWS_AS(load_factors("/nonexistent/file.csv"), std::runtime_error);
}
