#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gm/dense.hpp"
#include "gm/graph.hpp"
#include "gm/match_frame.hpp"

namespace gm {

struct EdgeListOptions {
  bool one_based = false;
  std::optional<std::size_t> n;           // vertex count override
  std::optional<std::size_t> layer_column;  // 1-based column index of the layer
};

struct EdgeListFile {
  std::vector<EdgeRecord> records;
  std::size_t n = 0;
  bool has_layers = false;
};

/// Whitespace-separated `src dst [weight] [layer]`, `#` comments, optional
/// header line. A non-numeric third column is read as the layer.
EdgeListFile read_edge_list(const std::string& path, const EdgeListOptions& opts = {});

void write_edge_list(const std::string& path, const Graph& g, bool one_based = false);
void write_edge_list(const std::string& path, const LayeredGraph& g, bool one_based = false);

/// Comma-separated dense matrix, 17 significant digits on write.
DenseMatrix read_dense_csv(const std::string& path);
void write_dense_csv(const std::string& path, const DenseMatrix& m);

/// Correspondence CSV with header corr_A,corr_B,seed.
void write_corr_csv(const std::string& path, const MatchResult& m, bool one_based = false);
struct CorrRow {
  std::size_t a;
  std::size_t b;
  bool seed;
};
std::vector<CorrRow> read_corr_csv(const std::string& path, bool one_based = false);

/// Two-column pair file (comma or whitespace separated), e.g. seeds or a
/// ground-truth correspondence.
std::vector<std::pair<std::size_t, std::size_t>> read_pairs(const std::string& path,
                                                            bool one_based = false);

/// Similarity scores: a dense CSV, or a sparse triplet file `a b value`.
DenseMatrix read_similarity(const std::string& path, std::size_t n_a, std::size_t n_b,
                            bool one_based = false);

/// Candidate lists `a b` expanded into a row-stochastic prior scaled by
/// `scale`: each row a spreads scale/|candidates(a)| over its candidates.
DenseMatrix candidates_to_similarity(const std::string& path, std::size_t n_a, std::size_t n_b,
                                     bool one_based, double scale);

}  // namespace gm
