#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gm/dense.hpp"
#include "gm/graph.hpp"
#include "gm/sparse.hpp"

namespace gm {

/// Validated list of hard-seed pairs: distinct on both sides, in range.
class SeedSet {
 public:
  SeedSet() = default;
  SeedSet(std::vector<std::pair<std::size_t, std::size_t>> pairs, std::size_t n_a,
          std::size_t n_b);

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  std::span<const std::pair<std::size_t, std::size_t>> pairs() const { return pairs_; }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

SeedSet resolve_seeds(std::span<const std::pair<std::size_t, std::size_t>> pair_table,
                      std::size_t n_a, std::size_t n_b);
/// Index form: each index i becomes the pair (i, i).
SeedSet resolve_seeds(std::span<const std::size_t> indices, std::size_t n_a, std::size_t n_b);
/// Flag form: true at position i becomes the pair (i, i).
SeedSet resolve_seeds(const std::vector<bool>& flags, std::size_t n_a, std::size_t n_b);

/// Dense nonnegative matrix with unit row and column sums (tolerance 1e-8 on
/// the sums, -1e-12 on entries). Construction validates.
class DoublyStochastic {
 public:
  explicit DoublyStochastic(DenseMatrix values);

  std::size_t order() const { return values_.rows(); }
  const DenseMatrix& values() const { return values_; }

 private:
  DenseMatrix values_;
};

/// Alternate row/column normalization until every sum is within tol of one.
/// Returns the number of sweeps used.
int sinkhorn_balance(DenseMatrix& m, double tol = 1e-8, int max_iter = 1000);

enum class StartKind { bari, rds, matrix };

/// Start matrix over the nns-by-nns nonseed block. Soft seeds are given in
/// indices relative to that block (hard seeds already removed); their rows
/// and columns are fixed to the 0/1 pattern and the remaining block is the
/// barycenter ("bari") or the mean of 10 random permutation matrices balanced
/// by Sinkhorn ("rds"). For StartKind::matrix the remaining block is taken
/// from `given`.
DoublyStochastic init_start(StartKind kind, std::size_t nns, const SeedSet& soft_seeds,
                            std::uint64_t rng_seed = 0,
                            const DenseMatrix* given = nullptr);

/// Map soft-seed pairs written in original vertex labels to indices relative
/// to the nonseed block that remains after removing the hard seeds.
SeedSet relative_soft_seeds(const SeedSet& soft, const SeedSet& hard, std::size_t n_a,
                            std::size_t n_b);

struct CorrPair {
  std::size_t a;
  std::size_t b;
  bool seed;
};

/// Correspondence plus bookkeeping returned by every matcher. A partial
/// match simply lists fewer pairs. n_matches() counts pairs whose endpoints
/// are both real vertices, excluding ones introduced by padding.
class MatchResult {
 public:
  std::span<const CorrPair> corr() const { return corr_; }
  std::pair<std::size_t, std::size_t> nnodes() const { return nnodes_; }
  std::size_t n_seeds() const { return n_seeds_; }
  std::size_t n_matches() const;
  const std::optional<DenseMatrix>& soft() const { return soft_; }
  const nlohmann::json& details() const { return details_; }
  nlohmann::json& details() { return details_; }

  /// b-side image of a, if matched.
  std::optional<std::size_t> image_of(std::size_t a) const;

  friend MatchResult make_match(std::vector<std::pair<std::size_t, std::size_t>> corr,
                                std::pair<std::size_t, std::size_t> nnodes,
                                const SeedSet& seeds, std::optional<DenseMatrix> soft,
                                nlohmann::json details);

 private:
  std::vector<CorrPair> corr_;
  std::pair<std::size_t, std::size_t> nnodes_{0, 0};
  std::size_t n_seeds_ = 0;
  std::optional<DenseMatrix> soft_;
  nlohmann::json details_;
};

/// Sole validated constructor: enforces injectivity on both sides and that
/// every seed pair appears in corr. Rows are sorted by the a-side index.
MatchResult make_match(std::vector<std::pair<std::size_t, std::size_t>> corr,
                       std::pair<std::size_t, std::size_t> nnodes, const SeedSet& seeds,
                       std::optional<DenseMatrix> soft = std::nullopt,
                       nlohmann::json details = nlohmann::json::object());

/// Sparse 0/1 matrix with a one at (a, b) for every corr pair, square of size
/// max(nA, nB). Partial matches leave zero rows.
SparseMatrix perm_matrix(const MatchResult& m);

/// The second graph under the match: P B P^T, of order max(nA, nB). Edges
/// touching unmatched vertices are dropped.
Graph permute_graph(const MatchResult& m, const Graph& g);

std::vector<CorrPair> nonseed_matches(const MatchResult& m);

}  // namespace gm
