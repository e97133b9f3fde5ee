#include "gm/graph.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "gm/errors.hpp"

namespace gm {
namespace {

std::pair<std::size_t, std::size_t> canonical_key(std::size_t a, std::size_t b, bool directed) {
  if (!directed && b < a) std::swap(a, b);
  return {a, b};
}

}  // namespace

Graph Graph::from_edges(std::span<const EdgeRecord> records, std::size_t n, bool directed,
                        bool loops) {
  Graph g;
  g.n_ = n;
  g.directed_ = directed;
  g.loops_ = loops;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;  // key -> index in edges_
  for (const auto& rec : records) {
    if (rec.src >= n || rec.dst >= n)
      throw InputError("vertex id out of range: " + std::to_string(rec.src) + "-" +
                       std::to_string(rec.dst) + " with n=" + std::to_string(n));
    if (!std::isfinite(rec.weight)) throw InputError("non-finite edge weight");
    if (rec.src == rec.dst && !loops)
      throw InputError("loop at vertex " + std::to_string(rec.src) +
                       " but loops are disabled");
    const auto key = canonical_key(rec.src, rec.dst, directed);
    auto it = seen.find(key);
    if (it != seen.end()) {
      if (g.edges_[it->second].weight != rec.weight)
        throw InputError("conflicting duplicate weights for edge " + std::to_string(rec.src) +
                         "-" + std::to_string(rec.dst));
      continue;
    }
    seen.emplace(key, g.edges_.size());
    g.edges_.push_back({key.first, key.second, rec.weight});
  }
  g.rebuild();
  return g;
}

void Graph::rebuild() {
  std::vector<Triplet> trips;
  trips.reserve(edges_.size() * 2);
  weighted_ = false;
  for (const auto& e : edges_) {
    if (e.weight != 1.0) weighted_ = true;
    trips.push_back({e.row, e.col, e.weight});
    if (!directed_ && e.row != e.col) trips.push_back({e.col, e.row, e.weight});
  }
  adj_ = SparseMatrix(n_, n_, trips);
  if (directed_) adj_t_ = adj_.transposed();
}

Graph Graph::padded(std::size_t target_n) const {
  if (target_n < n_) throw InputError("pad target smaller than graph order");
  Graph g = *this;
  g.n_ = target_n;
  g.rebuild();
  return g;
}

Graph Graph::relabeled(std::span<const std::size_t> perm) const {
  if (perm.size() != n_) throw InputError("relabel permutation length mismatch");
  Graph g = *this;
  g.edges_.clear();
  for (const auto& e : edges_) {
    auto key = canonical_key(perm[e.row], perm[e.col], directed_);
    g.edges_.push_back({key.first, key.second, e.weight});
  }
  g.rebuild();
  return g;
}

Graph Graph::induced(const std::vector<bool>& keep) const {
  if (keep.size() != n_) throw InputError("induced mask length mismatch");
  std::vector<std::ptrdiff_t> new_id(n_, -1);
  std::size_t next = 0;
  for (std::size_t v = 0; v < n_; ++v)
    if (keep[v]) new_id[v] = static_cast<std::ptrdiff_t>(next++);
  Graph g;
  g.n_ = next;
  g.directed_ = directed_;
  g.loops_ = loops_;
  for (const auto& e : edges_) {
    if (new_id[e.row] >= 0 && new_id[e.col] >= 0)
      g.edges_.push_back({static_cast<std::size_t>(new_id[e.row]),
                          static_cast<std::size_t>(new_id[e.col]), e.weight});
  }
  g.rebuild();
  return g;
}

LayeredGraph::LayeredGraph(std::vector<Graph> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw InputError("layered graph needs at least one layer");
  for (const auto& g : layers_) {
    if (g.order() != layers_.front().order())
      throw InputError("all layers must share the vertex count");
  }
  names_.resize(layers_.size());
}

void LayeredGraph::set_layer_names(std::vector<std::string> names) {
  if (names.size() != layers_.size()) throw InputError("layer name count mismatch");
  names_ = std::move(names);
}

LayeredGraph LayeredGraph::padded(std::size_t target_n) const {
  std::vector<Graph> padded_layers;
  padded_layers.reserve(layers_.size());
  for (const auto& g : layers_) padded_layers.push_back(g.padded(target_n));
  LayeredGraph out(std::move(padded_layers));
  out.names_ = names_;
  return out;
}

std::variant<Graph, LayeredGraph> graph_from_edge_list(std::span<const EdgeRecord> records,
                                                       std::size_t n, bool directed,
                                                       bool loops) {
  const bool layered = std::any_of(records.begin(), records.end(),
                                   [](const EdgeRecord& r) { return !r.layer.empty(); });
  if (!layered) return Graph::from_edges(records, n, directed, loops);

  std::vector<std::string> order;
  std::vector<std::vector<EdgeRecord>> grouped;
  for (const auto& rec : records) {
    auto it = std::find(order.begin(), order.end(), rec.layer);
    if (it == order.end()) {
      order.push_back(rec.layer);
      grouped.emplace_back();
      it = std::prev(order.end());
    }
    grouped[static_cast<std::size_t>(it - order.begin())].push_back(rec);
  }
  std::vector<Graph> layers;
  layers.reserve(grouped.size());
  for (const auto& recs : grouped) layers.push_back(Graph::from_edges(recs, n, directed, loops));
  LayeredGraph lg(std::move(layers));
  lg.set_layer_names(std::move(order));
  return lg;
}

Graph pad(const Graph& g, std::size_t target_n) { return g.padded(target_n); }

SplrMatrix center_graph(const Graph& g, const CenterScheme& scheme) {
  const std::size_t n = g.order();
  const SparseMatrix& adj = g.adjacency();
  switch (scheme.kind) {
    case CenterScheme::Kind::naive:
      return SplrMatrix(adj);
    case CenterScheme::Kind::pair: {
      if (scheme.lo >= scheme.hi) throw InputError("pair scheme needs lo < hi");
      double vmin = std::numeric_limits<double>::infinity();
      double vmax = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        for (double v : adj.row_values(i)) {
          vmin = std::min(vmin, v);
          vmax = std::max(vmax, v);
        }
      }
      if (adj.nnz() < n * n) {  // implicit zeros take part in the rescale
        vmin = std::min(vmin, 0.0);
        vmax = std::max(vmax, 0.0);
      }
      if (!(vmin < vmax)) throw InputError("constant adjacency cannot be rescaled");
      const double a = (scheme.hi - scheme.lo) / (vmax - vmin);
      const double b = scheme.lo - a * vmin;
      std::vector<Triplet> scaled = adj.triplets();
      for (auto& t : scaled) t.value *= a;
      DenseMatrix left(n, 1, b);
      DenseMatrix right(n, 1, 1.0);
      return SplrMatrix(SparseMatrix(n, n, scaled), std::move(left), std::move(right));
    }
    case CenterScheme::Kind::rank: {
      if (scheme.r < 1 || scheme.r >= n) throw InputError("rank scheme needs 1 <= r < n");
      const DenseMatrix dense_a = adj.dense();
      Eigen::MatrixXd m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(j)) = dense_a(i, j);
      DenseMatrix left(n, scheme.r);
      DenseMatrix right(n, scheme.r);
      if (!g.directed()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
        // best Frobenius rank-r approximation keeps the largest |eigenvalue|s
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
          const double fa = std::fabs(es.eigenvalues()(static_cast<Eigen::Index>(a)));
          const double fb = std::fabs(es.eigenvalues()(static_cast<Eigen::Index>(b)));
          return fa != fb ? fa > fb : a < b;
        });
        for (std::size_t k = 0; k < scheme.r; ++k) {
          const auto col = static_cast<Eigen::Index>(idx[k]);
          const double lambda = es.eigenvalues()(col);
          for (std::size_t i = 0; i < n; ++i) {
            const double u = es.eigenvectors()(static_cast<Eigen::Index>(i), col);
            left(i, k) = -lambda * u;
            right(i, k) = u;
          }
        }
      } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        for (std::size_t k = 0; k < scheme.r; ++k) {
          const auto col = static_cast<Eigen::Index>(k);
          const double sigma = svd.singularValues()(col);
          for (std::size_t i = 0; i < n; ++i) {
            left(i, k) = -sigma * svd.matrixU()(static_cast<Eigen::Index>(i), col);
            right(i, k) = svd.matrixV()(static_cast<Eigen::Index>(i), col);
          }
        }
      }
      return SplrMatrix(adj, std::move(left), std::move(right));
    }
  }
  throw InputError("unknown centering scheme");
}

LayeredGraph split_layers(const Graph& g, std::span<const std::string> edge_labels) {
  if (edge_labels.size() != g.edge_count())
    throw InputError("one label per edge required: " + std::to_string(edge_labels.size()) +
                     " labels for " + std::to_string(g.edge_count()) + " edges");
  std::vector<std::string> order;
  std::vector<std::vector<EdgeRecord>> grouped;
  const auto edges = g.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto it = std::find(order.begin(), order.end(), edge_labels[k]);
    if (it == order.end()) {
      order.push_back(edge_labels[k]);
      grouped.emplace_back();
      it = std::prev(order.end());
    }
    grouped[static_cast<std::size_t>(it - order.begin())].push_back(
        {edges[k].row, edges[k].col, edges[k].weight, {}});
  }
  std::vector<Graph> layers;
  layers.reserve(grouped.size());
  for (const auto& recs : grouped)
    layers.push_back(Graph::from_edges(recs, g.order(), g.directed(), g.loops_allowed()));
  LayeredGraph lg(std::move(layers));
  lg.set_layer_names(std::move(order));
  return lg;
}

std::vector<bool> largest_cc(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<int> comp(n, -1);
  int comp_count = 0;
  std::vector<std::size_t> comp_size;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    const int id = comp_count++;
    comp_size.push_back(0);
    std::queue<std::size_t> frontier;
    frontier.push(start);
    comp[start] = id;
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      ++comp_size[static_cast<std::size_t>(id)];
      auto visit = [&](std::span<const std::size_t> nbrs) {
        for (std::size_t w : nbrs) {
          if (comp[w] < 0) {
            comp[w] = id;
            frontier.push(w);
          }
        }
      };
      visit(g.adjacency().row_cols(v));
      if (g.directed()) visit(g.adjacency_transposed().row_cols(v));
    }
  }
  // components are discovered in order of their smallest vertex, so a strict
  // comparison implements the tie rule
  int best = -1;
  std::size_t best_size = 0;
  for (int id = 0; id < comp_count; ++id) {
    if (comp_size[static_cast<std::size_t>(id)] > best_size) {
      best_size = comp_size[static_cast<std::size_t>(id)];
      best = id;
    }
  }
  std::vector<bool> mask(n, false);
  for (std::size_t v = 0; v < n; ++v) mask[v] = comp[v] == best;
  return mask;
}

}  // namespace gm
