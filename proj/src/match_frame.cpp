#include "gm/match_frame.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gm/errors.hpp"
#include "gm/kernels.hpp"
#include "gm/rng.hpp"

namespace gm {

SeedSet::SeedSet(std::vector<std::pair<std::size_t, std::size_t>> pairs, std::size_t n_a,
                 std::size_t n_b)
    : pairs_(std::move(pairs)) {
  std::set<std::size_t> seen_a, seen_b;
  for (const auto& [a, b] : pairs_) {
    if (a >= n_a || b >= n_b) throw InputError("seed pair out of range");
    if (!seen_a.insert(a).second) throw InputError("duplicate a-side seed index");
    if (!seen_b.insert(b).second) throw InputError("duplicate b-side seed index");
  }
}

SeedSet resolve_seeds(std::span<const std::pair<std::size_t, std::size_t>> pair_table,
                      std::size_t n_a, std::size_t n_b) {
  return SeedSet({pair_table.begin(), pair_table.end()}, n_a, n_b);
}

SeedSet resolve_seeds(std::span<const std::size_t> indices, std::size_t n_a, std::size_t n_b) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(indices.size());
  for (std::size_t i : indices) pairs.emplace_back(i, i);
  return SeedSet(std::move(pairs), n_a, n_b);
}

SeedSet resolve_seeds(const std::vector<bool>& flags, std::size_t n_a, std::size_t n_b) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) pairs.emplace_back(i, i);
  return SeedSet(std::move(pairs), n_a, n_b);
}

DoublyStochastic::DoublyStochastic(DenseMatrix values) : values_(std::move(values)) {
  const std::size_t n = values_.rows();
  if (values_.cols() != n) throw InputError("doubly stochastic matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (values_(i, j) < -1e-12) throw InputError("negative entry in doubly stochastic matrix");
      row_sum += values_(i, j);
    }
    if (std::fabs(row_sum - 1.0) > 1e-8) throw InputError("row sum deviates from one");
  }
  for (std::size_t j = 0; j < n; ++j) {
    double col_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) col_sum += values_(i, j);
    if (std::fabs(col_sum - 1.0) > 1e-8) throw InputError("column sum deviates from one");
  }
}

int sinkhorn_balance(DenseMatrix& m, double tol, int max_iter) {
  const std::size_t n = m.rows();
  for (int iter = 1; iter <= max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const double s = kernels::sum(m.row(i), n);
      if (s <= 0.0) throw NumericalError("sinkhorn hit a nonpositive row sum");
      kernels::scale(m.row(i), 1.0 / s, n);
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += m(i, j);
      if (s <= 0.0) throw NumericalError("sinkhorn hit a nonpositive column sum");
      for (std::size_t i = 0; i < n; ++i) m(i, j) /= s;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::fabs(kernels::sum(m.row(i), n) - 1.0));
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += m(i, j);
      worst = std::max(worst, std::fabs(s - 1.0));
    }
    if (worst <= tol) return iter;
  }
  throw NumericalError("sinkhorn failed to balance within iteration budget");
}

SeedSet relative_soft_seeds(const SeedSet& soft, const SeedSet& hard, std::size_t n_a,
                            std::size_t n_b) {
  std::vector<bool> hard_a(n_a, false), hard_b(n_b, false);
  for (const auto& [a, b] : hard.pairs()) {
    hard_a[a] = true;
    hard_b[b] = true;
  }
  std::vector<std::size_t> rel_a(n_a, 0), rel_b(n_b, 0);
  std::size_t next = 0;
  for (std::size_t v = 0; v < n_a; ++v) {
    rel_a[v] = next;
    if (!hard_a[v]) ++next;
  }
  const std::size_t nns_a = next;
  next = 0;
  for (std::size_t v = 0; v < n_b; ++v) {
    rel_b[v] = next;
    if (!hard_b[v]) ++next;
  }
  const std::size_t nns_b = next;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [a, b] : soft.pairs()) {
    if (hard_a[a] || hard_b[b]) throw InputError("soft seed collides with a hard seed");
    pairs.emplace_back(rel_a[a], rel_b[b]);
  }
  return SeedSet(std::move(pairs), nns_a, nns_b);
}

DoublyStochastic init_start(StartKind kind, std::size_t nns, const SeedSet& soft_seeds,
                            std::uint64_t rng_seed, const DenseMatrix* given) {
  if (nns == 0) throw InputError("start matrix needs at least one vertex");
  std::vector<bool> soft_row(nns, false), soft_col(nns, false);
  for (const auto& [a, b] : soft_seeds.pairs()) {
    if (a >= nns || b >= nns) throw InputError("soft seed outside the nonseed block");
    soft_row[a] = true;
    soft_col[b] = true;
  }
  const std::size_t free_n = nns - soft_seeds.size();

  DenseMatrix block;
  if (free_n > 0) {
    switch (kind) {
      case StartKind::bari:
        block = DenseMatrix(free_n, free_n, 1.0 / static_cast<double>(free_n));
        break;
      case StartKind::rds: {
        // mean of 10 uniformly random permutation matrices, then balanced
        Rng rng(rng_seed);
        block = DenseMatrix(free_n, free_n, 0.0);
        for (int k = 0; k < 10; ++k) {
          const auto p = rng.permutation(free_n);
          for (std::size_t i = 0; i < free_n; ++i) block(i, p[i]) += 0.1;
        }
        sinkhorn_balance(block, 1e-8);
        break;
      }
      case StartKind::matrix: {
        if (given == nullptr) throw InputError("matrix start requires an explicit matrix");
        if (given->rows() != free_n || given->cols() != free_n)
          throw InputError("explicit start matrix has the wrong size");
        block = *given;
        break;
      }
    }
  }

  DenseMatrix out(nns, nns, 0.0);
  for (const auto& [a, b] : soft_seeds.pairs()) out(a, b) = 1.0;
  std::vector<std::size_t> free_rows, free_cols;
  for (std::size_t i = 0; i < nns; ++i)
    if (!soft_row[i]) free_rows.push_back(i);
  for (std::size_t j = 0; j < nns; ++j)
    if (!soft_col[j]) free_cols.push_back(j);
  for (std::size_t i = 0; i < free_rows.size(); ++i)
    for (std::size_t j = 0; j < free_cols.size(); ++j) out(free_rows[i], free_cols[j]) = block(i, j);
  return DoublyStochastic(std::move(out));
}

std::size_t MatchResult::n_matches() const {
  std::size_t count = 0;
  for (const auto& p : corr_)
    if (p.a < nnodes_.first && p.b < nnodes_.second) ++count;
  return count;
}

std::optional<std::size_t> MatchResult::image_of(std::size_t a) const {
  for (const auto& p : corr_)
    if (p.a == a) return p.b;
  return std::nullopt;
}

MatchResult make_match(std::vector<std::pair<std::size_t, std::size_t>> corr,
                       std::pair<std::size_t, std::size_t> nnodes, const SeedSet& seeds,
                       std::optional<DenseMatrix> soft, nlohmann::json details) {
  std::set<std::size_t> seen_a, seen_b;
  for (const auto& [a, b] : corr) {
    if (!seen_a.insert(a).second) throw InputError("corr is not injective on the a side");
    if (!seen_b.insert(b).second) throw InputError("corr is not injective on the b side");
  }
  std::set<std::pair<std::size_t, std::size_t>> corr_set(corr.begin(), corr.end());
  for (const auto& sp : seeds.pairs()) {
    if (!corr_set.count(sp)) throw InputError("seed pair missing from corr");
  }
  std::sort(corr.begin(), corr.end());
  std::set<std::pair<std::size_t, std::size_t>> seed_set(seeds.pairs().begin(),
                                                         seeds.pairs().end());
  MatchResult m;
  m.corr_.reserve(corr.size());
  for (const auto& [a, b] : corr) m.corr_.push_back({a, b, seed_set.count({a, b}) > 0});
  m.nnodes_ = nnodes;
  m.n_seeds_ = seeds.size();
  m.soft_ = std::move(soft);
  m.details_ = std::move(details);
  return m;
}

SparseMatrix perm_matrix(const MatchResult& m) {
  const std::size_t n = std::max(m.nnodes().first, m.nnodes().second);
  std::vector<Triplet> trips;
  trips.reserve(m.corr().size());
  for (const auto& p : m.corr()) trips.push_back({p.a, p.b, 1.0});
  return SparseMatrix(n, n, trips);
}

Graph permute_graph(const MatchResult& m, const Graph& g) {
  const std::size_t n = std::max(m.nnodes().first, m.nnodes().second);
  if (g.order() > n) throw InputError("graph larger than the matched universe");
  // map b -> a
  std::vector<std::ptrdiff_t> to_a(n, -1);
  for (const auto& p : m.corr()) to_a[p.b] = static_cast<std::ptrdiff_t>(p.a);
  std::vector<EdgeRecord> records;
  for (const auto& e : g.edges()) {
    const auto ra = to_a[e.row];
    const auto ca = to_a[e.col];
    if (ra >= 0 && ca >= 0)
      records.push_back({static_cast<std::size_t>(ra), static_cast<std::size_t>(ca), e.weight, {}});
  }
  return Graph::from_edges(records, n, g.directed(), g.loops_allowed());
}

std::vector<CorrPair> nonseed_matches(const MatchResult& m) {
  std::vector<CorrPair> out;
  for (const auto& p : m.corr())
    if (!p.seed) out.push_back(p);
  return out;
}

}  // namespace gm
