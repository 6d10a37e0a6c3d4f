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

#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tessindex/encoding.hpp"
#include "tessindex/eval.hpp"
#include "tessindex/index.hpp"
#include "tessindex/io.hpp"
#include "tessindex/parallel.hpp"

namespace {

using namespace tessindex;

int default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// format_double prints 1.0 as "1"; query output keeps a decimal point so the
// rate reads as a rate.
std::string format_rate(double v) {
    std::string s = format_double(v);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

struct SchemeFlags {
    std::string scheme = "counter";
    int base = 1;
    double threshold = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--scheme", scheme, "permutation scheme: one_hot or counter")
            ->check(CLI::IsMember({"one_hot", "counter"}));
        cmd->add_option("--base", base, "tessellation base D (1 = ternary)");
        cmd->add_option("--threshold", threshold, "zero out coordinates with |z_j| below this");
    }

    EncodingConfig config() const {
        EncodingConfig cfg;
        cfg.scheme = scheme_from_name(scheme);
        cfg.base = base;
        cfg.threshold = threshold;
        return cfg;
    }
};

std::vector<SparseEmbedding> embed_all(const std::vector<DenseFactor>& factors,
                                       const EncodingConfig& cfg, int threads) {
    std::vector<SparseEmbedding> embs(factors.size());
    parallel_for(factors.size(), threads, [&](std::size_t i) { embs[i] = encode(factors[i], cfg); });
    return embs;
}

int run(int argc, char** argv) {
    CLI::App app{"tessindex: sparse-embedding inverted-index retrieval over latent factors"};
    app.require_subcommand(1);
    app.fallthrough();  // --seed/--threads may follow the subcommand

    std::uint64_t seed = 0;
    int threads = default_threads();
    app.add_option("--seed", seed, "seed for every random draw")->capture_default_str();
    app.add_option("--threads", threads, "worker threads for batch stages")
        ->capture_default_str();

    // gen
    auto* gen = app.add_subcommand("gen", "generate standard-normal user/item factors");
    std::size_t n_users = 0, n_items = 0, k = 0;
    std::string users_out = "users.csv", items_out = "items.csv";
    gen->add_option("--n-users", n_users, "number of user factors")->required();
    gen->add_option("--n-items", n_items, "number of item factors")->required();
    gen->add_option("--k", k, "latent dimension")->required();
    gen->add_option("--users-out", users_out, "output CSV for user factors")
        ->capture_default_str();
    gen->add_option("--items-out", items_out, "output CSV for item factors")
        ->capture_default_str();

    // embed
    auto* embed = app.add_subcommand("embed", "factor CSV -> sparse embedding file");
    std::string embed_in, embed_out = "embeddings.txt";
    SchemeFlags embed_flags;
    embed->add_option("--in", embed_in, "input factor CSV")->required();
    embed->add_option("--out", embed_out, "output embedding file")->capture_default_str();
    embed_flags.attach(embed);

    // index
    auto* index_cmd = app.add_subcommand("index", "factor CSV -> inverted index snapshot");
    std::string index_in, index_out = "index.tix";
    SchemeFlags index_flags;
    index_cmd->add_option("--in", index_in, "input item factor CSV")->required();
    index_cmd->add_option("--out", index_out, "output snapshot")->capture_default_str();
    index_flags.attach(index_cmd);

    // query
    auto* query = app.add_subcommand("query", "top-kappa retrieval against a snapshot");
    std::string query_index, query_users;
    std::vector<std::uint64_t> user_ids;
    int kappa = 10;
    SchemeFlags query_flags;
    query->add_option("--index", query_index, "index snapshot")->required();
    query->add_option("--users", query_users, "user factor CSV")->required();
    query->add_option("--user-id", user_ids, "query only these user ids (default: all)");
    query->add_option("--kappa", kappa, "results per user")->capture_default_str();
    query_flags.attach(query);

    // bench
    auto* bench = app.add_subcommand("bench", "candidate-pruning benchmark");
    std::vector<std::string> methods{"tessindex"};
    std::size_t b_users = 0, b_items = 0, b_k = 0;
    std::string b_users_file, b_items_file, out_dir = ".";
    int b_kappa = 10;
    SchemeFlags bench_flags;
    int bits_or_depth = 8, tables = 4, arity_l = 16;
    bench->add_option("--method", methods,
                      "tessindex, srp, superbit, concomitant or pca_tree (repeatable)")
        ->capture_default_str();
    bench->add_option("--n-users", b_users, "synthetic user count");
    bench->add_option("--n-items", b_items, "synthetic item count");
    bench->add_option("--k", b_k, "synthetic latent dimension");
    bench->add_option("--users", b_users_file, "user factor CSV (instead of synthetic)");
    bench->add_option("--items", b_items_file, "item factor CSV (instead of synthetic)");
    bench->add_option("--kappa", b_kappa, "ground-truth set size")->capture_default_str();
    bench->add_option("--out-dir", out_dir, "directory for report files")->capture_default_str();
    bench_flags.attach(bench);
    bench->add_option("--bits", bits_or_depth, "code bits (srp/superbit) or tree depth (pca_tree)")
        ->capture_default_str();
    bench->add_option("--tables", tables, "boosting tables")->capture_default_str();
    bench->add_option("--arity-l", arity_l, "concomitant code arity")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            FactorSet fs = gen_synthetic(n_users, n_items, k, seed);
            save_factors(users_out, fs.users);
            save_factors(items_out, fs.items);
            std::cout << "wrote " << users_out << " (" << fs.users.size() << ") and " << items_out
                      << " (" << fs.items.size() << ")\n";
            return 0;
        }

        if (embed->parsed()) {
            std::vector<DenseFactor> factors = load_factors(embed_in);
            if (factors.empty()) throw std::invalid_argument("no factors in " + embed_in);
            EncodingConfig cfg = embed_flags.config();
            cfg.validate(factors.front().values.size());
            save_embeddings(embed_out, embed_all(factors, cfg, threads));
            std::cout << "wrote " << embed_out << " (" << factors.size()
                      << " embeddings, p = " << cfg.dim_p(factors.front().values.size()) << ")\n";
            return 0;
        }

        if (index_cmd->parsed()) {
            std::vector<DenseFactor> factors = load_factors(index_in);
            if (factors.empty()) throw std::invalid_argument("no factors in " + index_in);
            EncodingConfig cfg = index_flags.config();
            cfg.validate(factors.front().values.size());
            std::vector<SparseEmbedding> embs = embed_all(factors, cfg, threads);
            std::vector<std::pair<DenseFactor, SparseEmbedding>> entries;
            entries.reserve(factors.size());
            for (std::size_t i = 0; i < factors.size(); ++i) {
                entries.emplace_back(std::move(factors[i]), std::move(embs[i]));
            }
            InvertedIndex idx = build_index(std::move(entries));
            save_index(index_out, idx);
            std::cout << "wrote " << index_out << " (" << idx.item_count() << " items, p = "
                      << idx.dim_p << ")\n";
            return 0;
        }

        if (query->parsed()) {
            InvertedIndex idx = load_index(query_index);
            std::vector<DenseFactor> users = load_factors(query_users);
            if (idx.items.empty()) throw std::invalid_argument("index is empty");
            EncodingConfig cfg = query_flags.config();
            cfg.validate(idx.items.front().values.size());
            QueryConfig qcfg;
            qcfg.kappa = kappa;

            std::vector<DenseFactor> selected;
            if (user_ids.empty()) {
                selected = users;
            } else {
                for (std::uint64_t id : user_ids) {
                    bool found = false;
                    for (const DenseFactor& u : users) {
                        if (u.id == id) {
                            selected.push_back(u);
                            found = true;
                            break;
                        }
                    }
                    if (!found) {
                        throw std::invalid_argument("user id " + std::to_string(id) +
                                                    " not in " + query_users);
                    }
                }
            }
            for (const DenseFactor& u : selected) {
                SparseEmbedding emb = encode(u, cfg);
                std::vector<FactorId> cands = retrieve_candidates(idx, emb);
                RetrievalResult res = score_topk(u, cands, idx, qcfg);
                std::cout << "user " << u.id << " candidates=" << res.candidate_ids.size()
                          << " discard=" << format_rate(res.discard_rate) << "\n";
                for (const ScoredItem& s : res.topk) {
                    std::cout << s.id << " " << format_double(s.score) << "\n";
                }
            }
            return 0;
        }

        if (bench->parsed()) {
            bool synthetic = b_users_file.empty() && b_items_file.empty();
            FactorSet fs;
            if (synthetic) {
                if (b_users == 0 || b_items == 0 || b_k == 0) {
                    throw std::invalid_argument(
                        "bench needs --n-users/--n-items/--k or --users/--items files");
                }
                fs = gen_synthetic(b_users, b_items, b_k, seed);
            } else {
                if (b_users_file.empty() || b_items_file.empty()) {
                    throw std::invalid_argument("--users and --items must be given together");
                }
                fs = load_factor_set(b_users_file, b_items_file);
            }

            for (const std::string& name : methods) {
                BenchParams params;
                params.method = method_from_name(name);
                params.kappa = b_kappa;
                params.encoding = bench_flags.config();
                params.hash.bits_or_depth = bits_or_depth;
                params.hash.tables = tables;
                params.hash.arity_l = arity_l;
                params.seed = seed;
                params.threads = threads;

                BenchReport report = run_benchmark(fs, params);
                std::string report_path = out_dir + "/bench_" + name + "_report.txt";
                std::string csv_path = out_dir + "/bench_" + name + "_per_user.csv";
                write_file(report_path, render_report(report));
                write_file(csv_path, per_user_csv(report));
                std::cout << "method=" << name
                          << " mean_accuracy=" << format_double(report.mean_accuracy)
                          << " mean_discard=" << format_double(report.mean_discard)
                          << " mean_speedup=" << format_double(report.mean_speedup) << "\n";
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;  // no subcommand matched; require_subcommand should prevent this
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
