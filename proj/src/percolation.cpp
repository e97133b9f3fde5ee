#include "gm/percolation.hpp"

#include <cmath>
#include <limits>

#include "gm/errors.hpp"
#include "gm/kernels.hpp"

namespace gm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Percolator {
  std::size_t n;
  LayeredGraph a, b;
  DenseMatrix marks;
  std::vector<bool> row_done, col_done;
  std::vector<std::pair<std::size_t, std::size_t>> matched;
  std::vector<double> matched_mark;

  Percolator(const LayeredGraph& a_in, const LayeredGraph& b_in)
      : n(std::max(a_in.order(), b_in.order())),
        a(a_in.padded(n)),
        b(b_in.padded(n)),
        marks(n, n, 0.0),
        row_done(n, false),
        col_done(n, false) {}

  // M = A P B: a pair (u, v) adds A(i, u) * B(v, j) information to (i, j)
  void spread_from(std::size_t u, std::size_t v) {
    for (std::size_t l = 0; l < a.layer_count(); ++l) {
      const SparseMatrix& a_in = a.layer(l).adjacency_transposed();
      const SparseMatrix& b_out = b.layer(l).adjacency();
      const auto arows = a_in.row_cols(u);
      const auto avals = a_in.row_values(u);
      const auto bcols = b_out.row_cols(v);
      const auto bvals = b_out.row_values(v);
      for (std::size_t ka = 0; ka < arows.size(); ++ka) {
        const std::size_t i = arows[ka];
        double* mrow = marks.row(i);
        for (std::size_t kb = 0; kb < bcols.size(); ++kb) {
          const double inc = weighted_mark_increment(avals[ka], bvals[kb]);
          mrow[bcols[kb]] += inc;
        }
      }
    }
  }

  void exclude(std::size_t i, std::size_t j) {
    row_done[i] = true;
    col_done[j] = true;
    for (std::size_t k = 0; k < n; ++k) {
      marks(i, k) = kNegInf;
      marks(k, j) = kNegInf;
    }
  }

  void add_seed(std::size_t u, std::size_t v) {
    matched.emplace_back(u, v);
    exclude(u, v);
    spread_from(u, v);
  }

  /// Match while the top mark clears the threshold. Row-major argmax makes
  /// ties resolve to the smallest a, then smallest b.
  void percolate(double r, std::vector<std::pair<std::size_t, std::size_t>>& order) {
    while (marks.size() > 0) {
      const std::size_t flat = kernels::argmax(marks.data(), marks.size());
      const double top = marks.data()[flat];
      if (!(top >= r)) break;
      const std::size_t i = flat / n;
      const std::size_t j = flat % n;
      matched.emplace_back(i, j);
      matched_mark.push_back(top);
      order.emplace_back(i, j);
      exclude(i, j);
      spread_from(i, j);
    }
  }
};

void check_prior(const SeedSet& seeds, const std::optional<DenseMatrix>& similarity) {
  if (!seeds.empty()) return;
  if (similarity) {
    for (std::size_t k = 0; k < similarity->size(); ++k)
      if (similarity->data()[k] != 0.0) return;
  }
  throw PreconditionError("percolation needs at least one seed or a nonzero similarity");
}

void seed_marks(Percolator& perc, const SeedSet& seeds,
                const std::optional<DenseMatrix>& similarity) {
  if (similarity) {
    for (std::size_t i = 0; i < similarity->rows(); ++i)
      for (std::size_t j = 0; j < similarity->cols(); ++j)
        perc.marks(i, j) += (*similarity)(i, j);
  }
  for (const auto& [u, v] : seeds.pairs()) perc.add_seed(u, v);
}

nlohmann::json order_json(const std::vector<std::pair<std::size_t, std::size_t>>& order) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [i, j] : order) arr.push_back({i, j});
  return arr;
}

MatchResult result_from(Percolator& perc, const SeedSet& seeds,
                        std::pair<std::size_t, std::size_t> nnodes, nlohmann::json details) {
  return make_match(std::move(perc.matched), nnodes, seeds, std::nullopt, std::move(details));
}

}  // namespace

double weighted_mark_increment(double w_iu, double w_jv) {
  const double mx = std::max(std::fabs(w_iu), std::fabs(w_jv));
  if (mx == 0.0) return 0.0;
  return 1.0 - std::fabs(w_iu - w_jv) / mx;
}

MatchResult gm_percolation(const LayeredGraph& a, const LayeredGraph& b, const SeedSet& seeds,
                           const std::optional<DenseMatrix>& similarity, double r) {
  if (!(r > 0)) throw InputError("threshold r must be positive");
  check_prior(seeds, similarity);
  Percolator perc(a, b);
  seed_marks(perc, seeds, similarity);
  std::vector<std::pair<std::size_t, std::size_t>> order;
  perc.percolate(r, order);
  nlohmann::json details;
  details["method"] = "percolation";
  details["r"] = r;
  details["match_order"] = order_json(order);
  details["match_marks"] = perc.matched_mark;
  return result_from(perc, seeds, {a.order(), b.order()}, std::move(details));
}

MatchResult gm_expand_when_stuck(const LayeredGraph& a, const LayeredGraph& b,
                                 const SeedSet& seeds,
                                 const std::optional<DenseMatrix>& similarity, double r) {
  if (!(r > 0)) throw InputError("threshold r must be positive");
  check_prior(seeds, similarity);
  Percolator perc(a, b);
  seed_marks(perc, seeds, similarity);
  std::vector<std::pair<std::size_t, std::size_t>> order;
  perc.percolate(r, order);

  std::vector<bool> used_temp(perc.n * perc.n, false);
  int rounds = 0;
  nlohmann::json round_boundaries = nlohmann::json::array();
  while (true) {
    // every live pair holding a mark re-arms the spread, once per pair ever
    std::vector<std::pair<std::size_t, std::size_t>> temp_seeds;
    for (std::size_t i = 0; i < perc.n; ++i) {
      if (perc.row_done[i]) continue;
      const double* mrow = perc.marks.row(i);
      for (std::size_t j = 0; j < perc.n; ++j) {
        if (mrow[j] >= 1.0 && !used_temp[i * perc.n + j]) temp_seeds.emplace_back(i, j);
      }
    }
    if (temp_seeds.empty()) break;
    for (const auto& [u, v] : temp_seeds) {
      used_temp[u * perc.n + v] = true;
      perc.spread_from(u, v);
    }
    ++rounds;
    round_boundaries.push_back(order.size());
    perc.percolate(r, order);
  }

  nlohmann::json details;
  details["method"] = "expand_when_stuck";
  details["r"] = r;
  details["match_order"] = order_json(order);
  details["match_marks"] = perc.matched_mark;
  details["expansion_rounds"] = rounds;
  details["round_boundaries"] = std::move(round_boundaries);
  return result_from(perc, seeds, {a.order(), b.order()}, std::move(details));
}

}  // namespace gm
