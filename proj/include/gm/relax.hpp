#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gm/dense.hpp"
#include "gm/graph.hpp"
#include "gm/lap.hpp"
#include "gm/match_frame.hpp"
#include "gm/splr.hpp"

namespace gm {

/// Aligned layers of matching operands; centering produces nontrivial
/// low-rank parts, plain adjacencies ride along with rank zero.
using MatrixList = std::vector<SplrMatrix>;

MatrixList matrix_list(const Graph& g);
MatrixList matrix_list(const LayeredGraph& g);

enum class Objective { indefinite, convex, concave_mix };

/// Matching problem for the gradient-ascent family. Inputs need not share an
/// order; solvers pad internally. For concave_mix, lambda in [0, 1] blends
/// the convex surrogate into the Laplacian-based concave one.
struct RelaxProblem {
  MatrixList a;
  MatrixList b;
  SeedSet seeds;
  std::optional<DenseMatrix> similarity;  // nA x nB, larger = more alike
  Objective objective = Objective::indefinite;
  double lambda = 0.0;
  bool directed = false;  // set by the graph constructors; gates gm_path

  static RelaxProblem from_graphs(const LayeredGraph& a, const LayeredGraph& b, SeedSet seeds,
                                  std::optional<DenseMatrix> similarity = std::nullopt,
                                  Objective objective = Objective::indefinite);
  static RelaxProblem from_matrices(MatrixList a, MatrixList b, SeedSet seeds,
                                    std::optional<DenseMatrix> similarity = std::nullopt,
                                    Objective objective = Objective::indefinite,
                                    bool directed = false);
};

enum class FwStart { bari, rds, convex, matrix };

struct FwConfig {
  FwStart start = FwStart::bari;
  std::optional<DenseMatrix> start_matrix;  // nonseed block, doubly stochastic
  int max_iter = 20;
  double tol = 1e-5;  // squared Frobenius norm of the step
  LapMethod lap_method = LapMethod::dense;
  std::uint64_t rng_seed = 0;
};

struct PathConfig {
  double lambda_step = 0.01;
  /// Stop advancing lambda once the iterate sits within this squared
  /// Frobenius distance of its permutation rounding.
  double epsilon = 1e-8;
  FwConfig inner;
};

/// Objective value of the relaxed problem at a nonseed-block iterate.
/// Indefinite is a maximization value, convex and concave_mix are
/// minimization values; constants over seed-seed blocks are dropped.
double relax_objective(const RelaxProblem& p, const DenseMatrix& d);

/// Exact gradient of relax_objective at d (nonseed block).
DenseMatrix gradient(const RelaxProblem& p, const DenseMatrix& d);

/// Exact optimizer of the one-dimensional quadratic along [d, q]; maximizes
/// for the indefinite objective, minimizes otherwise. Ties return 1.
double line_search(const RelaxProblem& p, const DenseMatrix& d, const DenseMatrix& q);

MatchResult gm_fw(const RelaxProblem& p, const FwConfig& config = {});

/// Convex-to-concave continuation; single-layer undirected problems only.
MatchResult gm_path(const RelaxProblem& p, const PathConfig& config = {});

}  // namespace gm
