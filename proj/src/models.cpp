#include "gm/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gm/errors.hpp"
#include "gm/kernels.hpp"
#include "gm/rng.hpp"

namespace gm {
namespace {

constexpr double kSlack = 1e-12;

void check_probability(double p, const std::string& what) {
  if (!(p >= -kSlack && p <= 1.0 + kSlack)) throw InputError(what + " outside [0, 1]");
}

void check_feasible(double p, double rho, const std::string& where) {
  check_probability(p, "edge probability " + where);
  if (p <= 0.0 || p >= 1.0) return;  // degenerate marginals: correlation is moot
  const double lo = std::max(-p / (1.0 - p), (p - 1.0) / p);
  if (!(rho >= lo - kSlack && rho <= 1.0 + kSlack))
    throw InputError("correlation " + where + " outside the feasible interval");
}

/// One aligned Bernoulli pair with marginal p and correlation rho:
/// P(B=1 | A=1) = p + rho (1-p), P(B=1 | A=0) = p (1 - rho).
std::pair<bool, bool> sample_entry(Rng& rng, double p, double rho, bool correlated) {
  const bool a = rng.bernoulli(p);
  double pb = p;
  if (correlated) pb = a ? p + rho * (1.0 - p) : p * (1.0 - rho);
  const bool b = rng.bernoulli(pb);
  return {a, b};
}

using EntryModel = std::function<void(std::size_t, std::size_t, double&, double&, bool&)>;

std::pair<Graph, Graph> sample_pair(std::size_t n, SampleFlags flags, std::uint64_t rng_seed,
                                    const EntryModel& model) {
  Rng rng(rng_seed);
  std::vector<EdgeRecord> ea, eb;
  auto visit = [&](std::size_t u, std::size_t v) {
    double p = 0.0, rho = 0.0;
    bool correlated = true;
    model(u, v, p, rho, correlated);
    const auto [a, b] = sample_entry(rng, p, rho, correlated);
    if (a) ea.push_back({u, v, 1.0, {}});
    if (b) eb.push_back({u, v, 1.0, {}});
  };
  if (flags.directed) {
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v || flags.loops) visit(u, v);
  } else {
    for (std::size_t u = 0; u < n; ++u) {
      if (flags.loops) visit(u, u);
      for (std::size_t v = u + 1; v < n; ++v) visit(u, v);
    }
  }
  return {Graph::from_edges(ea, n, flags.directed, flags.loops),
          Graph::from_edges(eb, n, flags.directed, flags.loops)};
}

}  // namespace

std::pair<Graph, Graph> sample_correlated_gnp_pair(const CorrGnpParams& params,
                                                   std::uint64_t rng_seed) {
  check_feasible(params.p, params.corr, "");
  if (params.ncore && *params.ncore > params.n) throw InputError("ncore exceeds n");
  const std::size_t ncore = params.ncore.value_or(params.n);
  SampleFlags flags{params.directed, params.loops};
  auto [g1, g2] = sample_pair(params.n, flags, rng_seed,
                              [&](std::size_t u, std::size_t v, double& p, double& rho,
                                  bool& correlated) {
                                p = params.p;
                                rho = params.corr;
                                correlated = u < ncore && v < ncore;
                              });
  if (params.permutation) return {std::move(g1), g2.relabeled(*params.permutation)};
  return {std::move(g1), std::move(g2)};
}

std::pair<double, double> corr_to_overlap_params(double p, double rho) {
  if (rho < 0.0) throw InputError("overlap parameterization needs a nonnegative correlation");
  check_probability(p, "edge probability");
  const double s_prime = p + rho * (1.0 - p);
  const double p_prime = s_prime > 0.0 ? p / s_prime : 1.0;
  return {p_prime, s_prime};
}

std::pair<Graph, Graph> sample_correlated_ieg_pair(std::size_t n, const DenseMatrix& p_mat,
                                                   const DenseMatrix& c_mat, SampleFlags flags,
                                                   std::uint64_t rng_seed) {
  if (p_mat.rows() != n || p_mat.cols() != n || c_mat.rows() != n || c_mat.cols() != n)
    throw InputError("probability and correlation matrices must be n x n");
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!flags.directed && v < u) continue;  // lower triangle ignored
      if (!flags.loops && u == v) continue;
      check_feasible(p_mat(u, v), c_mat(u, v),
                     "at (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
  }
  return sample_pair(n, flags, rng_seed,
                     [&](std::size_t u, std::size_t v, double& p, double& rho, bool& correlated) {
                       p = p_mat(u, v);
                       rho = c_mat(u, v);
                       correlated = true;
                     });
}

std::pair<Graph, Graph> sample_correlated_sbm_pair(
    const std::vector<std::size_t>& block_sizes, const DenseMatrix& pref_matrix, double corr,
    const std::optional<std::vector<std::size_t>>& core_block_sizes, SampleFlags flags,
    std::uint64_t rng_seed) {
  const std::size_t k = block_sizes.size();
  if (pref_matrix.rows() != k || pref_matrix.cols() != k)
    throw InputError("preference matrix must be K x K");
  if (!flags.directed) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (pref_matrix(i, j) != pref_matrix(j, i))
          throw InputError("preference matrix must be symmetric for undirected graphs");
  }
  if (core_block_sizes) {
    if (core_block_sizes->size() != k) throw InputError("core block sizes must match K");
    for (std::size_t i = 0; i < k; ++i)
      if ((*core_block_sizes)[i] > block_sizes[i])
        throw InputError("core block larger than its block");
  }
  std::size_t n = 0;
  std::vector<std::size_t> block_of;
  std::vector<bool> core_of;
  for (std::size_t blk = 0; blk < k; ++blk) {
    const std::size_t core = core_block_sizes ? (*core_block_sizes)[blk] : block_sizes[blk];
    for (std::size_t i = 0; i < block_sizes[blk]; ++i) {
      block_of.push_back(blk);
      core_of.push_back(i < core);
    }
    n += block_sizes[blk];
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) check_feasible(pref_matrix(i, j), corr, "for blocks");
  return sample_pair(n, flags, rng_seed,
                     [&](std::size_t u, std::size_t v, double& p, double& rho, bool& correlated) {
                       p = pref_matrix(block_of[u], block_of[v]);
                       rho = corr;
                       correlated = core_of[u] && core_of[v];
                     });
}

std::pair<Graph, Graph> sample_correlated_rdpg_pair(const DenseMatrix& latent, double corr,
                                                    SampleFlags flags, std::uint64_t rng_seed) {
  const std::size_t n = latent.rows();
  const std::size_t d = latent.cols();
  DenseMatrix p(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      p(u, v) = kernels::dot(latent.row(u), latent.row(v), d);
      if (!flags.directed && v < u) continue;
      if (!flags.loops && u == v) continue;
      if (!(p(u, v) >= -kSlack && p(u, v) <= 1.0 + kSlack))
        throw InputError("latent inner product outside [0, 1] at (" + std::to_string(u) + "," +
                         std::to_string(v) + ")");
      check_feasible(std::clamp(p(u, v), 0.0, 1.0), corr, "for latent positions");
    }
  }
  return sample_pair(n, flags, rng_seed,
                     [&](std::size_t u, std::size_t v, double& pp, double& rho, bool& correlated) {
                       pp = std::clamp(p(u, v), 0.0, 1.0);
                       rho = corr;
                       correlated = true;
                     });
}

}  // namespace gm
