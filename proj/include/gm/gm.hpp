#pragma once

#include <functional>
#include <variant>

#include "gm/graph.hpp"
#include "gm/match_frame.hpp"
#include "gm/percolation.hpp"
#include "gm/relax.hpp"
#include "gm/spectral.hpp"

namespace gm {

/// User-supplied matcher, interchangeable with the built-ins. It receives the
/// two (multi-layer) graphs, seeds, and the similarity prior, and must build
/// its result through make_match.
using MatchFn = std::function<MatchResult(const LayeredGraph& a, const LayeredGraph& b,
                                          const SeedSet& seeds,
                                          const std::optional<DenseMatrix>& similarity)>;

enum class Method { indefinite, convex, path, percolation, expand, isorank, umeyama };

struct GmOptions {
  FwConfig fw;              // indefinite, convex, path stages
  PathConfig path;          // path schedule
  double r = 2.0;           // percolation threshold
  IsoRankConfig isorank;    // power-iteration controls
};

/// One front door over the built-in matchers. Graphs of different orders are
/// padded inside the individual algorithms.
MatchResult gm(const LayeredGraph& a, const LayeredGraph& b, const SeedSet& seeds,
               const std::optional<DenseMatrix>& similarity,
               const std::variant<Method, MatchFn>& method, const GmOptions& options = {});

MatchResult gm(const Graph& a, const Graph& b, const SeedSet& seeds,
               const std::optional<DenseMatrix>& similarity,
               const std::variant<Method, MatchFn>& method, const GmOptions& options = {});

}  // namespace gm
