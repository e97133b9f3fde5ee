#include "gm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gm/errors.hpp"
#include "gm/kernels.hpp"
#include "gm/rng.hpp"

namespace gm {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

LayerEdgeStats layer_stats(const Graph& a_pad, const Graph& b_perm, bool halve,
                           const std::vector<bool>& matched_a) {
  const std::size_t n = a_pad.order();
  const DenseMatrix ad = a_pad.adjacency().dense();
  const DenseMatrix pd = b_perm.adjacency().dense();
  LayerEdgeStats st;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!matched_a[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (!matched_a[j]) continue;
      const bool ea = ad(i, j) > 0.0;
      const bool eb = pd(i, j) > 0.0;
      if (ea && eb) ++st.common_edges;
      if (ea && !eb) ++st.missing_edges;
      if (!ea && eb) ++st.extra_edges;
      if (!ea && !eb) ++st.common_non_edges;
      if (ea) ++st.e1_count;
      if (eb) ++st.e2_count;
      const double diff = ad(i, j) - pd(i, j);
      sq += diff * diff;
    }
  }
  if (halve) {
    st.common_edges /= 2;
    st.missing_edges /= 2;
    st.extra_edges /= 2;
    st.common_non_edges /= 2;
    st.e1_count /= 2;
    st.e2_count /= 2;
  }
  st.fnorm = std::sqrt(sq);
  return st;
}

std::vector<bool> matched_mask_a(const MatchResult& m, std::size_t n) {
  std::vector<bool> mask(n, false);
  for (const auto& p : m.corr()) mask[p.a] = true;
  return mask;
}

std::vector<double> graph_rows(const LayeredGraph& g, std::size_t v) {
  const std::size_t n = g.order();
  std::vector<double> out(n * g.layer_count(), 0.0);
  for (std::size_t l = 0; l < g.layer_count(); ++l) {
    const auto cols = g.layer(l).adjacency().row_cols(v);
    const auto vals = g.layer(l).adjacency().row_values(v);
    for (std::size_t k = 0; k < cols.size(); ++k) out[l * n + cols[k]] = vals[k];
  }
  return out;
}

double pearson_based(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = kernels::sum(x.data(), n) / static_cast<double>(n);
  double my = kernels::sum(y.data(), n) / static_cast<double>(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return kNaN;  // constant row: undefined
  return 1.0 - sxy / std::sqrt(sxx * syy);
}

double stat_between_rows(const std::vector<double>& ra, const std::vector<double>& rb,
                         RowStatKind kind) {
  if (kind == RowStatKind::diff) return kernels::l1_diff(ra.data(), rb.data(), ra.size());
  return pearson_based(ra, rb);
}

}  // namespace

EdgeSummary match_summary(const MatchResult& m, const LayeredGraph& a, const LayeredGraph& b,
                          std::optional<std::span<const std::size_t>> true_label) {
  if (a.layer_count() != b.layer_count()) throw InputError("layer counts must match");
  const std::size_t n = std::max(a.order(), b.order());
  const LayeredGraph ap = a.padded(n);
  const auto mask = matched_mask_a(m, n);
  EdgeSummary out;
  out.n_matches = m.n_matches();
  out.n_seeds = m.n_seeds();
  for (std::size_t l = 0; l < a.layer_count(); ++l) {
    const Graph perm = permute_graph(m, b.layer(l));
    const bool halve = !ap.layer(l).directed() && !b.layer(l).directed();
    out.layers.push_back(layer_stats(ap.layer(l), perm, halve, mask));
  }
  if (true_label) {
    if (true_label->size() != a.order()) throw InputError("true_label length mismatch");
    std::size_t correct = 0;
    for (const auto& p : m.corr()) {
      if (p.seed || p.a >= true_label->size()) continue;
      if ((*true_label)[p.a] == p.b) ++correct;
    }
    out.n_true_matches = correct;
  }
  return out;
}

double edge_correctness(const EdgeSummary& summary) {
  double common = 0, e1 = 0;
  for (const auto& st : summary.layers) {
    common += st.common_edges;
    e1 += st.e1_count;
  }
  if (e1 <= 0.0) throw InputError("edge correctness undefined for an empty first graph");
  return common / e1;
}

std::size_t lccs_size(const MatchResult& m, const LayeredGraph& a, const LayeredGraph& b) {
  const std::size_t n = std::max(a.order(), b.order());
  const LayeredGraph ap = a.padded(n);
  const auto mask = matched_mask_a(m, n);
  // union over layers of the edges present on both sides
  std::vector<EdgeRecord> common;
  for (std::size_t l = 0; l < a.layer_count(); ++l) {
    const Graph perm = permute_graph(m, b.layer(l));
    const DenseMatrix pd = perm.adjacency().dense();
    for (const auto& e : ap.layer(l).edges()) {
      if (e.weight > 0.0 && pd(e.row, e.col) > 0.0) common.push_back({e.row, e.col, 1.0, {}});
    }
  }
  const Graph merged = Graph::from_edges(common, n, false, true).induced(mask);
  if (merged.order() == 0) return 0;
  const auto cc = largest_cc(merged);
  return static_cast<std::size_t>(std::count(cc.begin(), cc.end(), true));
}

double row_stat(std::size_t v, const MatchResult& m, const LayeredGraph& a,
                const LayeredGraph& b, RowStatKind kind) {
  if (!m.image_of(v)) throw InputError("vertex is not matched");
  const std::size_t n = std::max(a.order(), b.order());
  const LayeredGraph ap = a.padded(n);
  std::vector<Graph> perm_layers;
  for (std::size_t l = 0; l < b.layer_count(); ++l)
    perm_layers.push_back(permute_graph(m, b.layer(l)));
  const LayeredGraph bp(std::move(perm_layers));
  return stat_between_rows(graph_rows(ap, v), graph_rows(bp, v), kind);
}

double row_perm_stat(std::size_t v, const MatchResult& m, const LayeredGraph& a,
                     const LayeredGraph& b, RowStatKind kind, int n_mc,
                     std::uint64_t rng_seed) {
  if (n_mc < 2) throw InputError("need at least two Monte Carlo samples");
  const double t_star = row_stat(v, m, a, b, kind);
  const std::size_t n = std::max(a.order(), b.order());
  const LayeredGraph ap = a.padded(n);
  const LayeredGraph bp = b.padded(n);
  const std::vector<double> row_a = graph_rows(ap, v);
  std::vector<DenseMatrix> b_dense;
  for (std::size_t l = 0; l < bp.layer_count(); ++l)
    b_dense.push_back(bp.layer(l).adjacency().dense());

  Rng rng = Rng::derive(rng_seed, v);
  double mean = 0.0, m2 = 0.0;
  std::vector<double> row_b(row_a.size());
  for (int k = 0; k < n_mc; ++k) {
    const auto sigma = rng.permutation(n);
    for (std::size_t l = 0; l < b_dense.size(); ++l) {
      const double* src = b_dense[l].row(sigma[v]);
      for (std::size_t j = 0; j < n; ++j) row_b[l * n + j] = src[sigma[j]];
    }
    const double t = stat_between_rows(row_a, row_b, kind);
    const double delta = t - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (t - mean);
  }
  const double var = m2 / static_cast<double>(n_mc - 1);
  if (!(var > 0.0) || std::isnan(t_star)) return kNaN;
  return (t_star - mean) / std::sqrt(var);
}

std::vector<VertexStat> best_matches(const MatchResult& m, const LayeredGraph& a,
                                     const LayeredGraph& b, Measure measure,
                                     std::optional<std::size_t> num,
                                     std::optional<std::span<const std::size_t>> true_label,
                                     int n_mc, std::uint64_t rng_seed) {
  if (true_label && true_label->size() != a.order())
    throw InputError("true_label length mismatch");
  std::vector<VertexStat> rows;
  for (const auto& p : m.corr()) {
    if (p.seed) continue;
    if (p.a >= a.order() || p.b >= b.order()) continue;  // padded ends carry no signal
    double value = 0;
    switch (measure) {
      case Measure::row_diff:
        value = row_stat(p.a, m, a, b, RowStatKind::diff);
        break;
      case Measure::row_cor:
        value = row_stat(p.a, m, a, b, RowStatKind::cor);
        break;
      case Measure::row_perm_stat:
        value = row_perm_stat(p.a, m, a, b, RowStatKind::diff, n_mc, rng_seed);
        break;
    }
    rows.push_back({p.a, p.b, value, std::nullopt});
  }
  std::sort(rows.begin(), rows.end(), [](const VertexStat& x, const VertexStat& y) {
    const bool xn = std::isnan(x.value);
    const bool yn = std::isnan(y.value);
    if (xn != yn) return yn;  // NaN ranks last
    if (!xn && x.value != y.value) return x.value < y.value;
    return x.a_vertex < y.a_vertex;
  });
  if (true_label) {
    std::size_t correct = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if ((*true_label)[rows[k].a_vertex] == rows[k].b_vertex) ++correct;
      rows[k].precision = static_cast<double>(correct) / static_cast<double>(k + 1);
    }
  }
  if (num && rows.size() > *num) rows.resize(*num);
  return rows;
}

std::pair<std::vector<double>, std::vector<double>> core_junk_precision(
    std::span<const VertexStat> ranking, std::size_t n_core, std::size_t n_junk) {
  if (ranking.size() != n_core + n_junk)
    throw InputError("ranking must cover exactly the core and junk vertices");
  std::vector<double> core_curve(n_core, 0.0), junk_curve(n_junk, 0.0);
  std::size_t core_seen = 0;
  for (std::size_t r = 0; r < n_core; ++r) {
    if (ranking[r].a_vertex < n_core) ++core_seen;
    core_curve[r] = static_cast<double>(core_seen) / static_cast<double>(r + 1);
  }
  std::size_t junk_seen = 0;
  for (std::size_t r = 0; r < n_junk; ++r) {
    if (ranking[ranking.size() - 1 - r].a_vertex >= n_core) ++junk_seen;
    junk_curve[r] = static_cast<double>(junk_seen) / static_cast<double>(r + 1);
  }
  return {std::move(core_curve), std::move(junk_curve)};
}

DenseMatrix discrepancy_matrix(const MatchResult& m, const Graph& a, const Graph& b) {
  const std::size_t n = std::max(a.order(), b.order());
  const DenseMatrix ad = a.padded(n).adjacency().dense();
  const DenseMatrix pd = permute_graph(m, b).adjacency().dense();
  DenseMatrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool ea = ad(i, j) > 0.0;
      const bool eb = pd(i, j) > 0.0;
      out(i, j) = ea && eb ? 1.0 : (ea ? 2.0 : (eb ? 3.0 : 0.0));
    }
  }
  return out;
}

}  // namespace gm
