#include "gm/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "gm/errors.hpp"
#include "gm/kernels.hpp"

namespace gm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

SparseMatrix column_normalized(const SparseMatrix& adj) {
  const auto sums = adj.col_sums();
  auto trips = adj.triplets();
  for (auto& t : trips) {
    if (sums[t.col] != 0.0) t.value /= sums[t.col];
  }
  return SparseMatrix(adj.rows(), adj.cols(), trips);
}

DenseMatrix seeds_to_similarity(const SeedSet& seeds, std::size_t n) {
  // identity on seed pairs, uniform mass over the nonseed block
  DenseMatrix e(n, n, 0.0);
  std::vector<bool> sa(n, false), sb(n, false);
  for (const auto& [a, b] : seeds.pairs()) {
    e(a, b) = 1.0;
    sa[a] = true;
    sb[b] = true;
  }
  const std::size_t ns = n - seeds.size();
  if (ns > 0) {
    const double v = 1.0 / static_cast<double>(ns);
    for (std::size_t i = 0; i < n; ++i) {
      if (sa[i]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!sb[j]) e(i, j) = v;
    }
  }
  return e;
}

struct ExtractionResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  nlohmann::json order;  // greedy only
};

ExtractionResult extract(const DenseMatrix& profit, const SeedSet& seeds, Extraction how,
                         LapMethod lap_method) {
  const std::size_t n = profit.rows();
  std::vector<bool> sa(n, false), sb(n, false);
  for (const auto& [a, b] : seeds.pairs()) {
    sa[a] = true;
    sb[b] = true;
  }
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sa[i]) rows.push_back(i);
    if (!sb[i]) cols.push_back(i);
  }
  ExtractionResult out;
  out.order = nlohmann::json::array();
  for (const auto& [a, b] : seeds.pairs()) out.pairs.emplace_back(a, b);
  const std::size_t ns = rows.size();
  if (ns == 0) return out;
  if (how == Extraction::lap) {
    DenseMatrix block(ns, ns);
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t j = 0; j < ns; ++j) block(i, j) = profit(rows[i], cols[j]);
    const Assignment asg = do_lap(CostMatrix::from_dense(block), lap_method, LapSense::max);
    for (std::size_t i = 0; i < ns; ++i) out.pairs.emplace_back(rows[i], cols[asg.mapping[i]]);
    return out;
  }
  // greedy: repeated argmax with row/column removal, ties to the smallest
  // flat index (a first, then b)
  DenseMatrix work(ns, ns);
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < ns; ++j) work(i, j) = profit(rows[i], cols[j]);
  for (std::size_t step = 0; step < ns; ++step) {
    const std::size_t flat = kernels::argmax(work.data(), work.size());
    const std::size_t i = flat / ns;
    const std::size_t j = flat % ns;
    out.pairs.emplace_back(rows[i], cols[j]);
    out.order.push_back({rows[i], cols[j]});
    for (std::size_t k = 0; k < ns; ++k) {
      work(i, k) = kNegInf;
      work(k, j) = kNegInf;
    }
  }
  return out;
}

}  // namespace

SymmetricEigen symmetric_eigen(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("eigendecomposition needs a square matrix");
  for (std::size_t k = 0; k < m.size(); ++k)
    if (!std::isfinite(m.data()[k])) throw InputError("non-finite matrix entry");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const std::size_t n = m.rows();
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  // Eigen sorts ascending; flip to descending and normalize signs
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = static_cast<Eigen::Index>(n - 1 - k);
    out.values[k] = es.eigenvalues()(src);
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = es.eigenvectors()(static_cast<Eigen::Index>(i), src);
      if (std::fabs(x) > 1e-12) {
        sign = x < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      out.vectors(i, k) = sign * es.eigenvectors()(static_cast<Eigen::Index>(i), src);
  }
  return out;
}

std::pair<DenseMatrix, DenseMatrix> hermitian_embed(const Graph& g) {
  const DenseMatrix a = g.adjacency().dense();
  const std::size_t n = g.order();
  DenseMatrix sym(n, n), skew(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sym(i, j) = 0.5 * (a(i, j) + a(j, i));
      skew(i, j) = 0.5 * (a(i, j) - a(j, i));
    }
  }
  return {std::move(sym), std::move(skew)};
}

DenseMatrix hermitian_real_embedding(const DenseMatrix& sym, const DenseMatrix& skew) {
  const std::size_t n = sym.rows();
  if (skew.rows() != n || sym.cols() != n || skew.cols() != n)
    throw InputError("embedding parts must be square and matching");
  DenseMatrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = sym(i, j);
      m(i, n + j) = -skew(i, j);
      m(n + i, j) = skew(i, j);
      m(n + i, n + j) = sym(i, j);
    }
  }
  return m;
}

namespace {

/// Entrywise moduli of the leading eigenvectors, one column per eigenvalue.
/// Directed graphs go through the Hermitian embedding, whose doubled
/// spectrum is thinned by taking every other column.
DenseMatrix eigenvector_moduli(const Graph& g, bool hermitian) {
  const std::size_t n = g.order();
  if (!hermitian) {
    const SymmetricEigen se = symmetric_eigen(g.adjacency().dense());
    DenseMatrix u = se.vectors;
    for (std::size_t k = 0; k < u.size(); ++k) u.data()[k] = std::fabs(u.data()[k]);
    return u;
  }
  const auto [sym, skew] = hermitian_embed(g);
  const SymmetricEigen se = symmetric_eigen(hermitian_real_embedding(sym, skew));
  DenseMatrix u(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t col = 2 * k;  // spectra come in duplicated pairs
    for (std::size_t i = 0; i < n; ++i)
      u(i, k) = std::hypot(se.vectors(i, col), se.vectors(n + i, col));
  }
  return u;
}

}  // namespace

MatchResult gm_isorank(const LayeredGraph& a, const LayeredGraph& b, const SeedSet& seeds,
                       const std::optional<DenseMatrix>& similarity,
                       const IsoRankConfig& config) {
  if (a.layer_count() != b.layer_count()) throw InputError("layer counts must match");
  const std::size_t n = std::max(a.order(), b.order());
  const LayeredGraph ap = a.padded(n);
  const LayeredGraph bp = b.padded(n);

  DenseMatrix e(n, n, 0.0);
  if (similarity) {
    if (similarity->rows() != a.order() || similarity->cols() != b.order())
      throw InputError("similarity must be nA x nB");
    for (std::size_t i = 0; i < similarity->rows(); ++i)
      for (std::size_t j = 0; j < similarity->cols(); ++j) e(i, j) = (*similarity)(i, j);
  } else if (!seeds.empty()) {
    e = seeds_to_similarity(seeds, n);
  } else {
    throw PreconditionError("isorank needs a similarity or seeds");
  }
  const double e_norm = kernels::l1_norm(e.data(), e.size());
  if (e_norm == 0.0) throw PreconditionError("similarity is identically zero");
  kernels::scale(e.data(), 1.0 / e_norm, e.size());

  std::vector<SparseMatrix> an, bn;
  for (std::size_t l = 0; l < ap.layer_count(); ++l) {
    an.push_back(column_normalized(ap.layer(l).adjacency()));
    bn.push_back(column_normalized(bp.layer(l).adjacency()));
  }

  DenseMatrix d = e;
  int iters = 0;
  double diff = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    DenseMatrix next = e;
    for (std::size_t l = 0; l < an.size(); ++l) {
      // A D B^T accumulated layer by layer
      const DenseMatrix ad = an[l].times_dense(d);
      const DenseMatrix adbt = bn[l].times_dense(ad.transposed()).transposed();
      add_scaled(next, 1.0, adbt);
    }
    const double norm = kernels::l1_norm(next.data(), next.size());
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw NumericalError("power iteration lost normalization");
    kernels::scale(next.data(), 1.0 / norm, next.size());
    diff = kernels::l1_diff(next.data(), d.data(), d.size());
    d = std::move(next);
    iters = iter;
    if (diff < config.tol) break;
  }

  auto ext = extract(d, seeds, config.extraction, config.lap_method);
  nlohmann::json details;
  details["method"] = "isorank";
  details["iter"] = iters;
  details["final_diff"] = diff;
  details["update_convention"] = "A D B^T";
  details["extraction"] = config.extraction == Extraction::greedy ? "greedy" : "lap";
  if (config.extraction == Extraction::greedy) details["match_order"] = std::move(ext.order);
  details["lap_method"] = to_string(config.lap_method);
  SeedSet seed_copy({seeds.pairs().begin(), seeds.pairs().end()}, n, n);
  return make_match(std::move(ext.pairs), {a.order(), b.order()}, seed_copy, std::move(d),
                    std::move(details));
}

MatchResult gm_umeyama(const LayeredGraph& a, const LayeredGraph& b, const SeedSet& seeds,
                       const std::optional<DenseMatrix>& similarity) {
  if (a.layer_count() != b.layer_count()) throw InputError("layer counts must match");
  const std::size_t n = std::max(a.order(), b.order());
  const LayeredGraph ap = a.padded(n);
  const LayeredGraph bp = b.padded(n);

  DenseMatrix profit(n, n, 0.0);
  for (std::size_t l = 0; l < ap.layer_count(); ++l) {
    const bool hermitian = ap.layer(l).directed() || bp.layer(l).directed();
    const DenseMatrix ua = eigenvector_moduli(ap.layer(l), hermitian);
    const DenseMatrix ub = eigenvector_moduli(bp.layer(l), hermitian);
    // profit(a, b) = <|U_A| row a, |U_B| row b>
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        profit(i, j) += kernels::dot(ua.row(i), ub.row(j), n);
  }
  if (similarity) {
    if (similarity->rows() != a.order() || similarity->cols() != b.order())
      throw InputError("similarity must be nA x nB");
    for (std::size_t i = 0; i < similarity->rows(); ++i)
      for (std::size_t j = 0; j < similarity->cols(); ++j) profit(i, j) += (*similarity)(i, j);
  }

  auto ext = extract(profit, seeds, Extraction::lap, LapMethod::dense);
  nlohmann::json details;
  details["method"] = "umeyama";
  details["lap_method"] = "dense";
  SeedSet seed_copy({seeds.pairs().begin(), seeds.pairs().end()}, n, n);
  return make_match(std::move(ext.pairs), {a.order(), b.order()}, seed_copy, std::move(profit),
                    std::move(details));
}

}  // namespace gm
