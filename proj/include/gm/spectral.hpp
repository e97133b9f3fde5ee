#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gm/dense.hpp"
#include "gm/graph.hpp"
#include "gm/lap.hpp"
#include "gm/match_frame.hpp"

namespace gm {

/// Eigendecomposition of a symmetric matrix with a reproducible convention:
/// eigenvalues descending, each eigenvector's first non-negligible entry
/// positive.
struct SymmetricEigen {
  std::vector<double> values;
  DenseMatrix vectors;  // column k pairs with values[k]
};
SymmetricEigen symmetric_eigen(const DenseMatrix& m);

/// Split a directed adjacency into its symmetric part (A + A^T)/2 and skew
/// part (A - A^T)/2; the pair represents the Hermitian matrix S + iN.
std::pair<DenseMatrix, DenseMatrix> hermitian_embed(const Graph& g);

/// Real symmetric 2n x 2n embedding [[S, -N], [N, S]] of S + iN; its spectrum
/// duplicates the Hermitian one and eigenvector halves give complex moduli.
DenseMatrix hermitian_real_embedding(const DenseMatrix& sym, const DenseMatrix& skew);

enum class Extraction { greedy, lap };

struct IsoRankConfig {
  int max_iter = 50;
  double tol = 1e-6;
  Extraction extraction = Extraction::greedy;
  LapMethod lap_method = LapMethod::dense;
};

/// Power iteration on D <- sum_l A_l D B_l^T + E with column-normalized
/// adjacencies and L1-normalized prior E = S/|S|_1. Without a similarity,
/// seeds build E as (I_s (+) ones/(n-s)) normalized. Requires at least one
/// of the two.
MatchResult gm_isorank(const LayeredGraph& a, const LayeredGraph& b, const SeedSet& seeds,
                       const std::optional<DenseMatrix>& similarity,
                       const IsoRankConfig& config = {});

/// Eigenvector-modulus matching: profit(a, b) = sum_l <|U_A| row a, |U_B| row
/// b> (Hermitian treatment when either side is directed), plus similarity;
/// extraction by maximizing assignment over nonseeds.
MatchResult gm_umeyama(const LayeredGraph& a, const LayeredGraph& b, const SeedSet& seeds,
                       const std::optional<DenseMatrix>& similarity = std::nullopt);

}  // namespace gm
