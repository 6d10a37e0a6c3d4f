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
#include <memory>
#include <stdexcept>
#include <unordered_set>

#include "tessindex/index.hpp"
#include "tessindex/io.hpp"
#include "tessindex/parallel.hpp"
#include "tessindex/rng.hpp"

namespace tessindex {

namespace {

void check_side(const std::vector<DenseFactor>& side, std::size_t k, const char* name) {
    std::unordered_set<FactorId> seen;
    for (const DenseFactor& f : side) {
        if (f.values.size() != k) {
            throw std::invalid_argument(std::string(name) + " factors disagree on dimension");
        }
        if (!seen.insert(f.id).second) {
            throw std::invalid_argument(std::string(name) + " id " + std::to_string(f.id) +
                                        " repeats");
        }
    }
}

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
};

// Population moments over a fixed iteration order, so reruns agree bitwise.
Moments moments(const std::vector<PerUserRow>& rows, double PerUserRow::*field) {
    Moments m;
    if (rows.empty()) return m;
    for (const PerUserRow& r : rows) m.mean += r.*field;
    m.mean /= static_cast<double>(rows.size());
    double var = 0.0;
    for (const PerUserRow& r : rows) {
        double d = r.*field - m.mean;
        var += d * d;
    }
    m.stddev = std::sqrt(var / static_cast<double>(rows.size()));
    return m;
}

std::string format_params(const BenchReport& report) {
    const BenchParams& p = report.params;
    std::string out;
    out += "method = " + method_name(p.method) + "\n";
    out += "n_users = " + std::to_string(report.n_users) + "\n";
    out += "n_items = " + std::to_string(report.n_items) + "\n";
    out += "k = " + std::to_string(report.k) + "\n";
    out += "kappa = " + std::to_string(p.kappa) + "\n";
    out += "seed = " + std::to_string(p.seed) + "\n";
    if (p.method == Method::tessindex) {
        out += "scheme = " + scheme_name(p.encoding.scheme) + "\n";
        out += "base = " + std::to_string(p.encoding.base) + "\n";
        out += "threshold = " + format_double(p.encoding.threshold) + "\n";
    } else {
        out += "bits_or_depth = " + std::to_string(p.hash.bits_or_depth) + "\n";
        out += "tables = " + std::to_string(p.hash.tables) + "\n";
        if (p.method == Method::concomitant) {
            out += "arity_l = " + std::to_string(p.hash.arity_l) + "\n";
        }
    }
    return out;
}

}  // namespace

void FactorSet::validate() const {
    check_side(users, k, "user");
    check_side(items, k, "item");
}

FactorSet gen_synthetic(std::size_t n_users, std::size_t n_items, std::size_t k,
                        std::uint64_t seed) {
    if (n_users == 0 || n_items == 0 || k == 0) {
        throw std::invalid_argument("n_users, n_items and k must all be positive");
    }
    FactorSet fs;
    fs.k = k;
    fs.users.resize(n_users);
    fs.items.resize(n_items);
    for (std::size_t r = 0; r < n_users; ++r) {
        CounterRng rng(seed, streams::kFactorUsers, r);
        fs.users[r].id = r;
        fs.users[r].values.resize(k);
        for (double& v : fs.users[r].values) v = rng.next_gaussian();
    }
    for (std::size_t r = 0; r < n_items; ++r) {
        CounterRng rng(seed, streams::kFactorItems, r);
        fs.items[r].id = r;
        fs.items[r].values.resize(k);
        for (double& v : fs.items[r].values) v = rng.next_gaussian();
    }
    return fs;
}

FactorSet load_factor_set(const std::string& users_path, const std::string& items_path) {
    FactorSet fs;
    fs.users = load_factors(users_path);
    fs.items = load_factors(items_path);
    if (fs.users.empty() || fs.items.empty()) {
        throw std::invalid_argument("factor files must contain at least one row each");
    }
    fs.k = fs.users.front().values.size();
    if (fs.items.front().values.size() != fs.k) {
        throw std::invalid_argument("user and item files disagree on dimension");
    }
    fs.validate();
    return fs;
}

double recovery_accuracy(const std::vector<FactorId>& true_ids,
                         const std::vector<FactorId>& candidates) {
    if (true_ids.empty()) throw std::domain_error("empty ground-truth set");
    std::size_t hits = 0;
    auto it = candidates.begin();
    for (FactorId id : true_ids) {
        it = std::lower_bound(it, candidates.end(), id);
        if (it != candidates.end() && *it == id) {
            ++hits;
            ++it;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(true_ids.size());
}

std::string method_name(Method m) {
    switch (m) {
        case Method::tessindex: return "tessindex";
        case Method::srp: return "srp";
        case Method::superbit: return "superbit";
        case Method::concomitant: return "concomitant";
        case Method::pca_tree: return "pca_tree";
    }
    throw std::invalid_argument("unknown method");
}

Method method_from_name(const std::string& name) {
    if (name == "tessindex") return Method::tessindex;
    if (name == "srp") return Method::srp;
    if (name == "superbit") return Method::superbit;
    if (name == "concomitant") return Method::concomitant;
    if (name == "pca_tree") return Method::pca_tree;
    throw std::invalid_argument("unknown method '" + name + "'");
}

void BenchParams::validate(const FactorSet& factors) const {
    factors.validate();
    if (factors.users.empty() || factors.items.empty()) {
        throw std::invalid_argument("benchmark needs at least one user and one item");
    }
    if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
    if (static_cast<std::size_t>(kappa) > factors.items.size()) {
        throw std::invalid_argument("kappa exceeds the number of items");
    }
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (method == Method::tessindex) {
        encoding.validate(factors.k);
    } else {
        HashScheme h = hash;
        h.seed = seed;
        h.validate(factors.k);
    }
}

std::size_t histogram_bin(double discard) {
    double scaled = std::ceil(discard * 20.0) - 1.0;
    if (scaled < 0.0) return 0;
    if (scaled > 19.0) return 19;
    return static_cast<std::size_t>(scaled);
}

BenchReport bench_with_generator(const FactorSet& factors, const BenchParams& params,
                                 const CandidateFn& generator) {
    params.validate(factors);
    const std::size_t n_items = factors.items.size();

    BenchReport report;
    report.params = params;
    report.n_users = factors.users.size();
    report.n_items = n_items;
    report.k = factors.k;
    report.per_user.resize(factors.users.size());

    parallel_for(factors.users.size(), params.threads, [&](std::size_t u) {
        const DenseFactor& user = factors.users[u];
        std::vector<ScoredItem> truth = topk_scan(user, factors.items, params.kappa);
        std::vector<FactorId> true_ids(truth.size());
        for (std::size_t i = 0; i < truth.size(); ++i) true_ids[i] = truth[i].id;
        std::sort(true_ids.begin(), true_ids.end());

        std::vector<FactorId> candidates = generator(user);
        PerUserRow& row = report.per_user[u];
        row.user = user.id;
        row.accuracy = recovery_accuracy(true_ids, candidates);
        row.discard =
            1.0 - static_cast<double>(candidates.size()) / static_cast<double>(n_items);
    });

    Moments acc = moments(report.per_user, &PerUserRow::accuracy);
    Moments dis = moments(report.per_user, &PerUserRow::discard);
    report.mean_accuracy = acc.mean;
    report.stddev_accuracy = acc.stddev;
    report.mean_discard = dis.mean;
    report.stddev_discard = dis.stddev;

    const double eta_cap = 1.0 - 1.0 / static_cast<double>(n_items);
    double speedup = 0.0;
    for (const PerUserRow& r : report.per_user) {
        double eta = std::min(r.discard, eta_cap);
        speedup += 1.0 / (1.0 - eta);
        report.histogram[histogram_bin(r.discard)] += 1;
    }
    report.mean_speedup = speedup / static_cast<double>(report.per_user.size());
    return report;
}

BenchReport run_benchmark(const FactorSet& factors, const BenchParams& params) {
    params.validate(factors);

    if (params.method == Method::tessindex) {
        std::vector<std::pair<DenseFactor, SparseEmbedding>> entries;
        entries.reserve(factors.items.size());
        for (const DenseFactor& item : factors.items) {
            entries.emplace_back(item, encode(item, params.encoding));
        }
        auto idx = std::make_shared<InvertedIndex>(build_index(std::move(entries)));
        return bench_with_generator(factors, params, [idx, &params](const DenseFactor& user) {
            return retrieve_candidates(*idx, encode(user, params.encoding));
        });
    }

    HashScheme scheme = params.hash;
    scheme.seed = params.seed;
    switch (params.method) {
        case Method::srp: scheme.kind = HashKind::srp; break;
        case Method::superbit: scheme.kind = HashKind::superbit; break;
        case Method::concomitant: scheme.kind = HashKind::concomitant; break;
        case Method::pca_tree: scheme.kind = HashKind::pca_tree; break;
        case Method::tessindex: break;  // unreachable
    }
    auto buckets = std::make_shared<BucketIndex>(build_buckets(factors.items, scheme, factors.k));
    return bench_with_generator(factors, params, [buckets](const DenseFactor& user) {
        return boosted_candidates(user.values, *buckets);
    });
}

std::string render_report(const BenchReport& report) {
    std::string out = "tessindex bench report\n";
    out += "[params]\n";
    out += format_params(report);
    out += "[per_user]\n";
    out += "user,accuracy,discard\n";
    for (const PerUserRow& r : report.per_user) {
        out += std::to_string(r.user) + "," + format_double(r.accuracy) + "," +
               format_double(r.discard) + "\n";
    }
    out += "[aggregates]\n";
    out += "mean_accuracy = " + format_double(report.mean_accuracy) + "\n";
    out += "stddev_accuracy = " + format_double(report.stddev_accuracy) + "\n";
    out += "mean_discard = " + format_double(report.mean_discard) + "\n";
    out += "stddev_discard = " + format_double(report.stddev_discard) + "\n";
    out += "mean_speedup = " + format_double(report.mean_speedup) + "\n";
    out += "[histogram]\n";
    for (std::size_t b = 0; b < report.histogram.size(); ++b) {
        char label[32];
        std::snprintf(label, sizeof(label), "%c%.2f,%.2f] ", b == 0 ? '[' : '(',
                      static_cast<double>(b) / 20.0, static_cast<double>(b + 1) / 20.0);
        out += label + std::to_string(report.histogram[b]) + "\n";
    }
    return out;
}

std::string per_user_csv(const BenchReport& report) {
    std::string out = "user,accuracy,discard\n";
    for (const PerUserRow& r : report.per_user) {
        out += std::to_string(r.user) + "," + format_double(r.accuracy) + "," +
               format_double(r.discard) + "\n";
    }
    return out;
}

}  // namespace tessindex
