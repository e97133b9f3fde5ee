#include "gm/gm.hpp"

#include "gm/errors.hpp"

namespace gm {

MatchResult gm(const LayeredGraph& a, const LayeredGraph& b, const SeedSet& seeds,
               const std::optional<DenseMatrix>& similarity,
               const std::variant<Method, MatchFn>& method, const GmOptions& options) {
  if (const auto* fn = std::get_if<MatchFn>(&method)) return (*fn)(a, b, seeds, similarity);
  switch (std::get<Method>(method)) {
    case Method::indefinite:
      return gm_fw(RelaxProblem::from_graphs(a, b, seeds, similarity, Objective::indefinite),
                   options.fw);
    case Method::convex:
      return gm_fw(RelaxProblem::from_graphs(a, b, seeds, similarity, Objective::convex),
                   options.fw);
    case Method::path: {
      PathConfig cfg = options.path;
      cfg.inner = options.fw;
      return gm_path(RelaxProblem::from_graphs(a, b, seeds, similarity, Objective::convex), cfg);
    }
    case Method::percolation:
      return gm_percolation(a, b, seeds, similarity, options.r);
    case Method::expand:
      return gm_expand_when_stuck(a, b, seeds, similarity, options.r);
    case Method::isorank:
      return gm_isorank(a, b, seeds, similarity, options.isorank);
    case Method::umeyama:
      return gm_umeyama(a, b, seeds, similarity);
  }
  throw InputError("unknown matching method");
}

MatchResult gm(const Graph& a, const Graph& b, const SeedSet& seeds,
               const std::optional<DenseMatrix>& similarity,
               const std::variant<Method, MatchFn>& method, const GmOptions& options) {
  return gm(LayeredGraph({a}), LayeredGraph({b}), seeds, similarity, method, options);
}

}  // namespace gm
