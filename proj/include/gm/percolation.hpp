#pragma once

#include <optional>

#include "gm/dense.hpp"
#include "gm/graph.hpp"
#include "gm/match_frame.hpp"

namespace gm {

/// Score contributed by one neighboring pair of weighted edges, in [0, 1]:
/// 1 - |w_iu - w_jv| / max(|w_iu|, |w_jv|). Equal weights give 1; a pair with
/// both weights zero contributes nothing and is skipped by the callers.
double weighted_mark_increment(double w_iu, double w_jv);

/// Mark-propagation matcher. Marks start from the seeds (plus the similarity
/// prior, added once); while the best non-excluded mark reaches r, the argmax
/// pair is matched (ties by smallest a then b), removed from play, and its
/// neighboring pairs gain marks layer by layer. The result may be partial.
/// Requires at least one seed or a nonzero similarity.
MatchResult gm_percolation(const LayeredGraph& a, const LayeredGraph& b, const SeedSet& seeds,
                           const std::optional<DenseMatrix>& similarity = std::nullopt,
                           double r = 2.0);

/// Percolation that re-arms when stuck: every unmatched pair holding at least
/// one mark becomes a temporary seed (at most once per pair across the run),
/// spreading marks to its neighboring pairs without entering the match.
MatchResult gm_expand_when_stuck(const LayeredGraph& a, const LayeredGraph& b,
                                 const SeedSet& seeds,
                                 const std::optional<DenseMatrix>& similarity = std::nullopt,
                                 double r = 2.0);

}  // namespace gm
