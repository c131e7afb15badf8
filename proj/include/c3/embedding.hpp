#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "c3/errors.hpp"
#include "c3/lexicon.hpp"
#include "c3/rng.hpp"

namespace c3 {

struct EmbeddingTable {
  std::unordered_map<std::string, int> vocab;
  Eigen::MatrixXd vectors;  // rows indexed by vocab; out-of-vocabulary = zeros
  int dim = 0;

  // Lookup is case-folded as a fallback; pretrained tables are usually
  // uncased while our tokenizer preserves case.
  int row_of(const std::string& token) const {
    auto it = vocab.find(token);
    if (it != vocab.end()) return it->second;
    it = vocab.find(detail::ascii_lower(token));
    return it != vocab.end() ? it->second : -1;
  }

  Eigen::VectorXd embed(const std::string& token) const {
    const int row = row_of(token);
    if (row < 0) return Eigen::VectorXd::Zero(dim);
    return vectors.row(row).transpose();
  }

  // Fraction of corpus tokens with a pretrained vector.
  double coverage(const std::vector<std::vector<std::string>>& docs) const {
    std::size_t hits = 0, total = 0;
    for (const auto& doc : docs)
      for (const auto& tok : doc) {
        ++total;
        if (row_of(tok) >= 0) ++hits;
      }
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
  }
};

// Text embedding file: one token per line followed by `expected_dim`
// space-separated decimal reals. A malformed line aborts the load and names
// the line number. Duplicate tokens keep the first occurrence.
inline EmbeddingTable load_embeddings(const std::string& path, int expected_dim) {
  if (expected_dim < 1) throw UsageError("load_embeddings: dimension must be >= 1");
  std::ifstream in(path);
  if (!in) throw FileError("cannot open embedding file: " + path);

  EmbeddingTable table;
  table.dim = expected_dim;
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected token and " +
                      std::to_string(expected_dim) + " values");
    const std::string token = line.substr(0, sp);
    Eigen::VectorXd vec(expected_dim);
    const char* p = line.c_str() + sp;
    int count = 0;
    while (*p) {
      while (*p == ' ' || *p == '\t') ++p;
      if (!*p) break;
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p)
        throw DataError(path + ":" + std::to_string(lineno) + ": unparseable value");
      if (count < expected_dim) vec[count] = v;
      ++count;
      p = end;
    }
    if (count != expected_dim)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(expected_dim) + " values, found " +
                      std::to_string(count));
    if (table.vocab.emplace(token, static_cast<int>(rows.size())).second)
      rows.push_back(std::move(vec));
  }
  table.vectors.resize(static_cast<Eigen::Index>(rows.size()), expected_dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    table.vectors.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return table;
}

// Seeded gaussian vectors for a fixed vocabulary; a stand-in when no
// pretrained file is supplied. Tokens are stored lowercased and sorted so the
// table is independent of input order.
inline EmbeddingTable make_random_embeddings(const std::vector<std::string>& tokens,
                                             int dim, std::uint64_t seed) {
  if (dim < 1) throw UsageError("make_random_embeddings: dimension must be >= 1");
  std::set<std::string> uniq;
  for (const auto& t : tokens) uniq.insert(detail::ascii_lower(t));
  EmbeddingTable table;
  table.dim = dim;
  table.vectors.resize(static_cast<Eigen::Index>(uniq.size()), dim);
  Rng rng(seed);
  int row = 0;
  for (const auto& t : uniq) {
    table.vocab.emplace(t, row);
    for (int j = 0; j < dim; ++j) table.vectors(row, j) = 0.1 * rng.gaussian();
    ++row;
  }
  return table;
}

}  // namespace c3
