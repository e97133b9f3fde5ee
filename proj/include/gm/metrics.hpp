#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gm/dense.hpp"
#include "gm/graph.hpp"
#include "gm/match_frame.hpp"

namespace gm {

/// Per-layer edge agreement between A and P B P^T, restricted to matched
/// vertices. An aligned entry pair counts as common when both values are
/// positive. Counts are halved when both graphs are undirected, so they read
/// as unordered-edge counts (and can be half-integral for asymmetric inputs).
struct LayerEdgeStats {
  double common_edges = 0;
  double missing_edges = 0;
  double extra_edges = 0;
  double common_non_edges = 0;
  double fnorm = 0;       // Frobenius norm of A - P B P^T on the matched block
  double e1_count = 0;    // graph-1 edges under the same counting convention
  double e2_count = 0;
};

struct EdgeSummary {
  std::vector<LayerEdgeStats> layers;
  std::size_t n_matches = 0;
  std::size_t n_seeds = 0;
  /// Correct non-seed matches; present when the true correspondence is known.
  std::optional<std::size_t> n_true_matches;
};

EdgeSummary match_summary(const MatchResult& m, const LayeredGraph& a, const LayeredGraph& b,
                          std::optional<std::span<const std::size_t>> true_label = std::nullopt);

/// Fraction of graph-1 edges preserved by the match (summed over layers).
double edge_correctness(const EdgeSummary& summary);

/// Size of the largest vertex set whose common-edge graph (edges present on
/// both sides, any layer) is connected; singletons count, so a nonempty
/// matched set yields at least 1.
std::size_t lccs_size(const MatchResult& m, const LayeredGraph& a, const LayeredGraph& b);

enum class RowStatKind { diff, cor };

/// Vertex-level fit of matched vertex v: L1 row difference, or one minus the
/// row correlation (NaN when a row is constant). Layers concatenate.
double row_stat(std::size_t v, const MatchResult& m, const LayeredGraph& a,
                const LayeredGraph& b, RowStatKind kind);

/// Monte Carlo standardization of row_stat against uniformly random
/// permutations: (T(v, P*) - mean) / sd over n_mc samples. Deterministic in
/// rng_seed, with an independent stream per vertex. NaN when the sampled
/// statistic is constant.
double row_perm_stat(std::size_t v, const MatchResult& m, const LayeredGraph& a,
                     const LayeredGraph& b, RowStatKind kind, int n_mc = 200,
                     std::uint64_t rng_seed = 0);

enum class Measure { row_diff, row_cor, row_perm_stat };

struct VertexStat {
  std::size_t a_vertex = 0;
  std::size_t b_vertex = 0;
  double value = 0;
  std::optional<double> precision;
};

/// Non-seed matches sorted ascending by the measure (NaN last, ties by vertex
/// id), optionally truncated to the best `num` and annotated with cumulative
/// precision against the true correspondence.
std::vector<VertexStat> best_matches(const MatchResult& m, const LayeredGraph& a,
                                     const LayeredGraph& b, Measure measure,
                                     std::optional<std::size_t> num = std::nullopt,
                                     std::optional<std::span<const std::size_t>> true_label =
                                         std::nullopt,
                                     int n_mc = 200, std::uint64_t rng_seed = 0);

/// Core/junk identification curves over a full ranking: entry r-1 of the core
/// curve is the fraction of the top r ranks held by core vertices (ids below
/// n_core), and of the junk curve, the fraction of the bottom r ranks held by
/// junk vertices.
std::pair<std::vector<double>, std::vector<double>> core_junk_precision(
    std::span<const VertexStat> ranking, std::size_t n_core, std::size_t n_junk);

/// Cell codes comparing A against P B P^T: 0 neither, 1 common, 2 only in A,
/// 3 only in B.
DenseMatrix discrepancy_matrix(const MatchResult& m, const Graph& a, const Graph& b);

}  // namespace gm
