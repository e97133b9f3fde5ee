#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gm/dense.hpp"
#include "gm/graph.hpp"

namespace gm {

struct SampleFlags {
  bool directed = false;
  bool loops = false;
};

/// Parameters for a correlated homogeneous random graph pair: both graphs
/// are marginally G(n, p) with Pearson correlation `corr` on aligned entries.
/// Entries touching vertices at or beyond ncore are sampled independently
/// (junk vertices). The optional permutation relabels graph 2.
struct CorrGnpParams {
  std::size_t n = 0;
  double p = 0.5;
  double corr = 0.0;
  std::optional<std::vector<std::size_t>> permutation;
  bool directed = false;
  bool loops = false;
  std::optional<std::size_t> ncore;
};

std::pair<Graph, Graph> sample_correlated_gnp_pair(const CorrGnpParams& params,
                                                   std::uint64_t rng_seed);

/// Overlap parameterization (p', s') of a nonnegative-correlation pair:
/// s' = p + rho (1 - p), p' = p / s'.
std::pair<double, double> corr_to_overlap_params(double p, double rho);

/// Heterogeneous pair: entry (u, v) has marginal p_mat(u, v) and correlation
/// c_mat(u, v). Undirected loopless sampling reads the upper triangle only.
std::pair<Graph, Graph> sample_correlated_ieg_pair(std::size_t n, const DenseMatrix& p_mat,
                                                   const DenseMatrix& c_mat, SampleFlags flags,
                                                   std::uint64_t rng_seed);

/// Block-model pair: entry probability pref(block(u), block(v)); correlation
/// `corr` on pairs of core vertices (the first core_block_sizes[k] of each
/// block), independent otherwise.
std::pair<Graph, Graph> sample_correlated_sbm_pair(
    const std::vector<std::size_t>& block_sizes, const DenseMatrix& pref_matrix, double corr,
    const std::optional<std::vector<std::size_t>>& core_block_sizes, SampleFlags flags,
    std::uint64_t rng_seed);

/// Dot-product pair: entry probability <latent row u, latent row v>, all of
/// which must lie in [0, 1].
std::pair<Graph, Graph> sample_correlated_rdpg_pair(const DenseMatrix& latent, double corr,
                                                    SampleFlags flags, std::uint64_t rng_seed);

}  // namespace gm
