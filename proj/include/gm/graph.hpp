#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gm/sparse.hpp"
#include "gm/splr.hpp"

namespace gm {

/// One line of an edge list; layer is empty when the input has no layers.
struct EdgeRecord {
  std::size_t src = 0;
  std::size_t dst = 0;
  double weight = 1.0;
  std::string layer;
};

struct Edge {
  std::size_t row;
  std::size_t col;
  double weight;
};

/// Adjacency-backed graph. Undirected graphs store both (i,j) and (j,i) in
/// the CSR so row access works uniformly; the canonical edge list keeps one
/// entry per edge in first-appearance order.
class Graph {
 public:
  Graph() = default;
  static Graph from_edges(std::span<const EdgeRecord> records, std::size_t n, bool directed,
                          bool loops);

  std::size_t order() const { return n_; }
  bool directed() const { return directed_; }
  bool loops_allowed() const { return loops_; }
  bool weighted() const { return weighted_; }

  std::span<const Edge> edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  const SparseMatrix& adjacency() const { return adj_; }
  /// In-neighbor view; same object as adjacency() for undirected graphs.
  const SparseMatrix& adjacency_transposed() const { return directed_ ? adj_t_ : adj_; }

  /// Weighted out-degrees (row sums of the adjacency).
  std::vector<double> degrees() const { return adj_.row_sums(); }

  Graph padded(std::size_t target_n) const;
  /// Relabel vertices: vertex i becomes perm[i].
  Graph relabeled(std::span<const std::size_t> perm) const;
  /// Induced subgraph on the vertices flagged true, original ids compacted in
  /// ascending order.
  Graph induced(const std::vector<bool>& keep) const;

 private:
  std::size_t n_ = 0;
  bool directed_ = false;
  bool loops_ = false;
  bool weighted_ = false;
  std::vector<Edge> edges_;
  SparseMatrix adj_;
  SparseMatrix adj_t_;

  void rebuild();
};

class LayeredGraph {
 public:
  explicit LayeredGraph(std::vector<Graph> layers);

  std::size_t order() const { return layers_.front().order(); }
  std::size_t layer_count() const { return layers_.size(); }
  const Graph& layer(std::size_t l) const { return layers_[l]; }
  std::span<const Graph> layers() const { return layers_; }
  const std::vector<std::string>& layer_names() const { return names_; }
  void set_layer_names(std::vector<std::string> names);

  LayeredGraph padded(std::size_t target_n) const;

 private:
  std::vector<Graph> layers_;
  std::vector<std::string> names_;
};

/// Builds a Graph, or a LayeredGraph when any record carries a layer label
/// (layers ordered by first appearance).
std::variant<Graph, LayeredGraph> graph_from_edge_list(std::span<const EdgeRecord> records,
                                                       std::size_t n, bool directed, bool loops);

Graph pad(const Graph& g, std::size_t target_n);

struct CenterScheme {
  enum class Kind { pair, naive, rank };
  Kind kind = Kind::pair;
  double lo = -1.0;
  double hi = 1.0;
  std::size_t r = 0;

  static CenterScheme center() { return {Kind::pair, -1.0, 1.0, 0}; }
  static CenterScheme naive() { return {Kind::naive, 0, 0, 0}; }
  static CenterScheme pair(double lo, double hi) { return {Kind::pair, lo, hi, 0}; }
  static CenterScheme rank(std::size_t r) { return {Kind::rank, 0, 0, r}; }
};

/// Recode the adjacency for matching. "pair" rescales all entries affinely so
/// the minimum and maximum land on (lo, hi); "naive" leaves it unchanged;
/// "rank" subtracts the best rank-r approximation (largest-magnitude spectrum
/// for undirected graphs, singular triplets for directed ones). The result
/// stays in sparse-plus-low-rank form.
SplrMatrix center_graph(const Graph& g, const CenterScheme& scheme);

/// Partition the canonical edges by label, one layer per distinct label in
/// first-appearance order.
LayeredGraph split_layers(const Graph& g, std::span<const std::string> edge_labels);

/// Mask of the largest weakly-connected component (ties by smallest vertex
/// id). Empty graph gives an empty mask.
std::vector<bool> largest_cc(const Graph& g);

}  // namespace gm
