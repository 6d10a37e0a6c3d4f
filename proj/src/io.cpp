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
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace tessindex {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return lines;
}

double parse_double(const std::string& field, const std::string& path, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(path, line, "not a number: '" + field + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& field, const std::string& path, std::size_t line) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(path, line, "not a non-negative integer: '" + field + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string factors_to_csv(const std::vector<DenseFactor>& factors) {
    std::string out = "id";
    std::size_t k = factors.empty() ? 0 : factors.front().values.size();
    for (std::size_t i = 0; i < k; ++i) out += ",f" + std::to_string(i);
    out += '\n';
    for (const DenseFactor& f : factors) {
        out += std::to_string(f.id);
        for (double v : f.values) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<DenseFactor> factors_from_csv(const std::string& text, const std::string& path) {
    auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(path, 1, "missing header");

    auto header = split(lines[0], ',');
    if (header.size() < 2 || header[0] != "id") {
        throw ParseError(path, 1, "expected header 'id,f0,...'");
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i] != "f" + std::to_string(i - 1)) {
            throw ParseError(path, 1, "bad header field '" + header[i] + "'");
        }
    }
    const std::size_t k = header.size() - 1;

    std::vector<DenseFactor> out;
    std::unordered_set<FactorId> seen;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        auto fields = split(lines[ln], ',');
        if (fields.size() != k + 1) {
            throw ParseError(path, ln + 1,
                             "expected " + std::to_string(k + 1) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        DenseFactor f;
        f.id = parse_u64(fields[0], path, ln + 1);
        if (!seen.insert(f.id).second) {
            throw ParseError(path, ln + 1, "duplicate id " + std::to_string(f.id));
        }
        f.values.reserve(k);
        for (std::size_t i = 1; i <= k; ++i) {
            f.values.push_back(parse_double(fields[i], path, ln + 1));
        }
        out.push_back(std::move(f));
    }
    return out;
}

void save_factors(const std::string& path, const std::vector<DenseFactor>& factors) {
    write_file(path, factors_to_csv(factors));
}

std::vector<DenseFactor> load_factors(const std::string& path) {
    return factors_from_csv(read_file(path), path);
}

std::string embeddings_to_text(const std::vector<SparseEmbedding>& embs) {
    std::string out;
    for (const SparseEmbedding& e : embs) {
        out += std::to_string(e.id);
        out += '\t';
        out += std::to_string(e.dim_p);
        out += '\t';
        for (std::size_t i = 0; i < e.entries.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(e.entries[i].index);
            out += ':';
            out += format_double(e.entries[i].value);
        }
        out += '\n';
    }
    return out;
}

std::vector<SparseEmbedding> embeddings_from_text(const std::string& text, const std::string& path) {
    std::vector<SparseEmbedding> out;
    auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        auto fields = split(lines[ln], '\t');
        if (fields.size() != 3) throw ParseError(path, ln + 1, "expected id<TAB>p<TAB>entries");
        SparseEmbedding e;
        e.id = parse_u64(fields[0], path, ln + 1);
        e.dim_p = static_cast<std::uint32_t>(parse_u64(fields[1], path, ln + 1));
        std::uint32_t prev = 0;
        bool first = true;
        for (const std::string& pair : split(fields[2], ',')) {
            std::size_t colon = pair.find(':');
            if (colon == std::string::npos) {
                throw ParseError(path, ln + 1, "expected idx:val, got '" + pair + "'");
            }
            SparseEntry entry;
            entry.index =
                static_cast<std::uint32_t>(parse_u64(pair.substr(0, colon), path, ln + 1));
            entry.value = parse_double(pair.substr(colon + 1), path, ln + 1);
            if (entry.index >= e.dim_p) throw ParseError(path, ln + 1, "index out of range");
            if (!first && entry.index <= prev) {
                throw ParseError(path, ln + 1, "indices not strictly increasing");
            }
            prev = entry.index;
            first = false;
            e.entries.push_back(entry);
        }
        out.push_back(std::move(e));
    }
    return out;
}

void save_embeddings(const std::string& path, const std::vector<SparseEmbedding>& embs) {
    write_file(path, embeddings_to_text(embs));
}

std::vector<SparseEmbedding> load_embeddings(const std::string& path) {
    return embeddings_from_text(read_file(path), path);
}

void save_index(const std::string& path, const InvertedIndex& idx) {
    std::string out = "tessindex v1 p=" + std::to_string(idx.dim_p) +
                      " n=" + std::to_string(idx.item_count()) + "\n";
    for (std::uint32_t i = 0; i < idx.dim_p; ++i) {
        if (idx.postings[i].empty()) continue;
        out += std::to_string(i);
        out += ':';
        for (std::size_t j = 0; j < idx.postings[i].size(); ++j) {
            if (j) out += ',';
            out += std::to_string(idx.postings[i][j]);
        }
        out += '\n';
    }
    out += factors_to_csv(idx.items);
    write_file(path, out);
}

InvertedIndex load_index(const std::string& path) {
    std::string text = read_file(path);
    auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(path, 1, "missing header");

    std::uint32_t dim_p = 0;
    std::size_t n = 0;
    {
        std::istringstream hs(lines[0]);
        std::string magic, version, p_field, n_field;
        hs >> magic >> version >> p_field >> n_field;
        if (magic != "tessindex" || version != "v1" || p_field.rfind("p=", 0) != 0 ||
            n_field.rfind("n=", 0) != 0) {
            throw ParseError(path, 1, "bad snapshot header");
        }
        dim_p = static_cast<std::uint32_t>(parse_u64(p_field.substr(2), path, 1));
        n = parse_u64(n_field.substr(2), path, 1);
    }

    InvertedIndex idx;
    idx.dim_p = dim_p;
    idx.postings.resize(dim_p);

    // posting lines carry a ':'; the factor CSV section starts at its header
    std::size_t ln = 1;
    for (; ln < lines.size(); ++ln) {
        if (lines[ln].find(':') == std::string::npos) break;
        std::size_t colon = lines[ln].find(':');
        std::uint32_t index =
            static_cast<std::uint32_t>(parse_u64(lines[ln].substr(0, colon), path, ln + 1));
        if (index >= dim_p) throw ParseError(path, ln + 1, "posting index out of range");
        for (const std::string& id_str : split(lines[ln].substr(colon + 1), ',')) {
            idx.postings[index].push_back(parse_u64(id_str, path, ln + 1));
        }
    }

    std::string csv;
    for (std::size_t i = ln; i < lines.size(); ++i) {
        csv += lines[i];
        csv += '\n';
    }
    idx.items = factors_from_csv(csv, path);
    if (idx.items.size() != n) {
        throw ParseError(path, ln + 1, "item count does not match header");
    }
    for (std::uint32_t i = 0; i < idx.items.size(); ++i) {
        idx.item_pos.emplace(idx.items[i].id, i);
    }
    for (const auto& list : idx.postings) {
        for (FactorId id : list) {
            if (!idx.item_pos.contains(id)) {
                throw ParseError(path, 1, "posted id " + std::to_string(id) + " has no factor");
            }
        }
    }
    return idx;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw std::runtime_error("error reading " + path);
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("error writing " + path);
}

}  // namespace tessindex
