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

#include <stdexcept>
#include <string>
#include <vector>

#include "tessindex/index.hpp"
#include "tessindex/types.hpp"

namespace tessindex {

// Malformed input file; the message carries the path and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Factor CSV: header `id,f0,...,f{k-1}`, one factor per row, ids unique
// non-negative integers.
std::string factors_to_csv(const std::vector<DenseFactor>& factors);
std::vector<DenseFactor> factors_from_csv(const std::string& text, const std::string& path = "<string>");
void save_factors(const std::string& path, const std::vector<DenseFactor>& factors);
std::vector<DenseFactor> load_factors(const std::string& path);

// Embedding file: one `id<TAB>p<TAB>idx:val,idx:val,...` line per factor,
// indices ascending, values at full round-trip precision.
std::string embeddings_to_text(const std::vector<SparseEmbedding>& embs);
std::vector<SparseEmbedding> embeddings_from_text(const std::string& text,
                                                  const std::string& path = "<string>");
void save_embeddings(const std::string& path, const std::vector<SparseEmbedding>& embs);
std::vector<SparseEmbedding> load_embeddings(const std::string& path);

// Index snapshot: `tessindex v1 p=<dim_p> n=<N>` header, non-empty postings
// as `idx:id,id,...` lines, then the item factors in factor CSV form.
void save_index(const std::string& path, const InvertedIndex& idx);
InvertedIndex load_index(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tessindex
