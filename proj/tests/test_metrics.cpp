#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gm/errors.hpp"
#include "gm/metrics.hpp"
#include "gm/models.hpp"
#include "gm/rng.hpp"
#include "oracles.hpp"

using namespace gm;

namespace {

Graph g5() {
  std::vector<EdgeRecord> recs{{0, 1}, {1, 2}, {1, 4}, {2, 4}};
  return Graph::from_edges(recs, 5, false, false);
}

LayeredGraph single(const Graph& g) { return LayeredGraph({g}); }

MatchResult identity_match(std::size_t n, std::size_t n_seeds = 0) {
  std::vector<std::pair<std::size_t, std::size_t>> corr;
  std::vector<std::pair<std::size_t, std::size_t>> sp;
  for (std::size_t i = 0; i < n; ++i) corr.emplace_back(i, i);
  for (std::size_t i = 0; i < n_seeds; ++i) sp.emplace_back(i, i);
  return make_match(corr, {n, n}, SeedSet(sp, n, n));
}

Graph random_graph(Rng& rng, std::size_t n, double p) {
  std::vector<EdgeRecord> recs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.next_double() < p) recs.push_back({i, j});
  return Graph::from_edges(recs, n, false, false);
}

}  // namespace

TEST_CASE("summary of a perfect match") {
  const Graph g = g5();
  const MatchResult m = identity_match(5);
  const EdgeSummary s = match_summary(m, single(g), single(g));
  REQUIRE(s.layers.size() == 1);
  CHECK(s.layers[0].common_edges == 4.0);
  CHECK(s.layers[0].missing_edges == 0.0);
  CHECK(s.layers[0].extra_edges == 0.0);
  CHECK(s.layers[0].fnorm == 0.0);
  CHECK(s.n_matches == 5);
  CHECK(edge_correctness(s) == 1.0);
}

TEST_CASE("summary counts one flipped edge") {
  const Graph a = g5();
  // replace edge (2,4) with (3,4): one missing, one extra
  std::vector<EdgeRecord> recs{{0, 1}, {1, 2}, {1, 4}, {3, 4}};
  const Graph b = Graph::from_edges(recs, 5, false, false);
  const EdgeSummary s = match_summary(identity_match(5), single(a), single(b));
  CHECK(s.layers[0].common_edges == 3.0);
  CHECK(s.layers[0].missing_edges == 1.0);
  CHECK(s.layers[0].extra_edges == 1.0);
  CHECK(edge_correctness(s) == doctest::Approx(0.75));
  // undirected disagreements appear twice in the ordered sum
  CHECK(s.layers[0].fnorm == doctest::Approx(std::sqrt(4.0)));
}

TEST_CASE("counts split by layer and respect the true label") {
  Rng rng(3);
  const Graph l1 = random_graph(rng, 6, 0.5);
  const Graph l2 = random_graph(rng, 6, 0.5);
  const LayeredGraph lg({l1, l2});
  std::vector<std::size_t> truth(6);
  std::iota(truth.begin(), truth.end(), std::size_t{0});
  const EdgeSummary s = match_summary(identity_match(6, 2), lg, lg,
                                      std::span<const std::size_t>(truth));
  REQUIRE(s.layers.size() == 2);
  CHECK(s.layers[0].e1_count == static_cast<double>(l1.edge_count()));
  CHECK(s.layers[1].e1_count == static_cast<double>(l2.edge_count()));
  CHECK(s.n_seeds == 2);
  REQUIRE(s.n_true_matches.has_value());
  CHECK(*s.n_true_matches == 4);  // non-seed correct matches only
}

TEST_CASE("identity-preserving invariants on random pairs") {
  Rng rng(7);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 6 + rng.next_below(4);
    const Graph a = random_graph(rng, n, 0.5);
    const Graph b = random_graph(rng, n, 0.5);
    const auto perm = rng.permutation(n);
    std::vector<std::pair<std::size_t, std::size_t>> corr;
    for (std::size_t i = 0; i < n; ++i) corr.emplace_back(i, perm[i]);
    const MatchResult m = make_match(corr, {n, n}, SeedSet{});
    const EdgeSummary s = match_summary(m, single(a), single(b));
    // full matches partition the edge sets
    CHECK(s.layers[0].common_edges + s.layers[0].missing_edges ==
          static_cast<double>(a.edge_count()));
    CHECK(s.layers[0].common_edges + s.layers[0].extra_edges ==
          static_cast<double>(b.edge_count()));
    // squared norm counts each unordered disagreement twice
    CHECK(s.layers[0].fnorm * s.layers[0].fnorm ==
          doctest::Approx(2.0 * (s.layers[0].missing_edges + s.layers[0].extra_edges))
              .epsilon(1e-9));
  }
}

TEST_CASE("largest common connected subgraph") {
  SUBCASE("identical connected graphs keep everything") {
    std::vector<EdgeRecord> recs{{0, 1}, {1, 2}, {2, 3}};
    const Graph g = Graph::from_edges(recs, 4, false, false);
    CHECK(lccs_size(identity_match(4), single(g), single(g)) == 4);
  }
  SUBCASE("edgeless graphs leave singletons") {
    const Graph e = Graph::from_edges({}, 3, false, false);
    CHECK(lccs_size(identity_match(3), single(e), single(e)) == 1);
  }
  SUBCASE("component structure of the common-edge graph decides") {
    // A: path 0-1-2 plus path 3-4 plus edge 5; B drops nothing; then remove
    // the 1-2 edge from B so common components are {0,1}, {3,4}, singletons
    std::vector<EdgeRecord> ea{{0, 1}, {1, 2}, {3, 4}};
    std::vector<EdgeRecord> eb{{0, 1}, {3, 4}};
    const Graph a = Graph::from_edges(ea, 6, false, false);
    const Graph b = Graph::from_edges(eb, 6, false, false);
    CHECK(lccs_size(identity_match(6), single(a), single(b)) == 2);
    // add a chain through 1-2 and 2-5 in both: common component {0,1,2,5}
    std::vector<EdgeRecord> ea2{{0, 1}, {1, 2}, {2, 5}, {3, 4}};
    std::vector<EdgeRecord> eb2{{0, 1}, {1, 2}, {2, 5}};
    const Graph a2 = Graph::from_edges(ea2, 6, false, false);
    const Graph b2 = Graph::from_edges(eb2, 6, false, false);
    CHECK(lccs_size(identity_match(6), single(a2), single(b2)) == 4);
  }
}

TEST_CASE("row statistics") {
  const Graph g = g5();
  SUBCASE("identical graphs have zero difference rows") {
    for (std::size_t v = 0; v < 5; ++v)
      CHECK(row_stat(v, identity_match(5), single(g), single(g), RowStatKind::diff) == 0.0);
  }
  SUBCASE("correlation of identical non-constant rows is zero") {
    CHECK(row_stat(1, identity_match(5), single(g), single(g), RowStatKind::cor) ==
          doctest::Approx(0.0));
  }
  SUBCASE("constant rows make the correlation undefined") {
    CHECK(std::isnan(row_stat(3, identity_match(5), single(g), single(g), RowStatKind::cor)));
  }
  SUBCASE("two edge disagreements cost two") {
    std::vector<EdgeRecord> eb{{0, 1}, {1, 2}};  // drop edges (1,4) and (2,4)
    const Graph b = Graph::from_edges(eb, 5, false, false);
    CHECK(row_stat(4, identity_match(5), single(g), single(b), RowStatKind::diff) == 2.0);
  }
  SUBCASE("unmatched vertices are rejected") {
    std::vector<std::pair<std::size_t, std::size_t>> corr{{0, 0}};
    const MatchResult partial = make_match(corr, {5, 5}, SeedSet{});
    CHECK_THROWS_AS(row_stat(2, partial, single(g), single(g), RowStatKind::diff), InputError);
  }
}

TEST_CASE("permutation-standardized statistic") {
  SUBCASE("all-identical rows have zero variance, hence no value") {
    // complete graph: every row identical up to the diagonal
    std::vector<EdgeRecord> recs;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) recs.push_back({i, j});
    const Graph k4 = Graph::from_edges(recs, 4, false, false);
    CHECK(std::isnan(
        row_perm_stat(0, identity_match(4), single(k4), single(k4), RowStatKind::diff, 50, 1)));
  }
  SUBCASE("correct matches in a correlated pair score below the random mean") {
    CorrGnpParams params;
    params.n = 50;
    params.p = 0.3;
    params.corr = 0.9;
    const auto [a, b] = sample_correlated_gnp_pair(params, 13);
    const MatchResult m = identity_match(50);
    int negative = 0;
    for (std::size_t v = 0; v < 10; ++v) {
      const double t =
          row_perm_stat(v, m, single(a), single(b), RowStatKind::diff, 200, 7);
      if (t < 0) ++negative;
    }
    CHECK(negative >= 9);
  }
  SUBCASE("sample moments approach the exhaustive ones on tiny graphs") {
    Rng rng(5);
    const std::size_t n = 5;
    const Graph a = random_graph(rng, n, 0.5);
    const Graph b = random_graph(rng, n, 0.5);
    const MatchResult m = identity_match(n);
    // exhaustive first and second moments of T(v, sigma) over all n!
    const std::size_t v = 1;
    const DenseMatrix ad = a.padded(n).adjacency().dense();
    const DenseMatrix bd = b.padded(n).adjacency().dense();
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    double mean = 0, sq = 0, count = 0;
    do {
      double t = 0;
      for (std::size_t k = 0; k < n; ++k) t += std::fabs(ad(v, k) - bd(sigma[v], sigma[k]));
      mean += t;
      sq += t * t;
      ++count;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    mean /= count;
    const double var = sq / count - mean * mean;

    // large Monte Carlo run reproduces them within 2%
    Rng mc = Rng::derive(3, v);
    double m1 = 0, m2 = 0;
    const int n_mc = 200000;
    for (int k = 0; k < n_mc; ++k) {
      const auto s = mc.permutation(n);
      double t = 0;
      for (std::size_t kk = 0; kk < n; ++kk) t += std::fabs(ad(v, kk) - bd(s[v], s[kk]));
      m1 += t;
      m2 += t * t;
    }
    m1 /= n_mc;
    const double mc_var = m2 / n_mc - m1 * m1;
    CHECK(std::fabs(m1 - mean) / mean < 0.02);
    CHECK(std::fabs(mc_var - var) / var < 0.02);
  }
  SUBCASE("deterministic given the seed") {
    Rng rng(11);
    const Graph a = random_graph(rng, 8, 0.5);
    const Graph b = random_graph(rng, 8, 0.5);
    const MatchResult m = identity_match(8);
    const double t1 = row_perm_stat(2, m, single(a), single(b), RowStatKind::diff, 100, 42);
    const double t2 = row_perm_stat(2, m, single(a), single(b), RowStatKind::diff, 100, 42);
    CHECK(t1 == t2);
  }
}

TEST_CASE("ranked matches with precision column") {
  const Graph g = g5();
  SUBCASE("perfect match ranks everything at zero with full precision") {
    std::vector<std::size_t> truth{0, 1, 2, 3, 4};
    const auto rows = best_matches(identity_match(5, 2), single(g), single(g),
                                   Measure::row_diff, std::nullopt,
                                   std::span<const std::size_t>(truth));
    REQUIRE(rows.size() == 3);  // non-seeds only
    for (const auto& r : rows) {
      CHECK(r.value == 0.0);
      REQUIRE(r.precision.has_value());
      CHECK(*r.precision == 1.0);
    }
    // ties resolve by vertex id
    CHECK(rows[0].a_vertex == 2);
    CHECK(rows[1].a_vertex == 3);
    CHECK(rows[2].a_vertex == 4);
  }
  SUBCASE("cumulative precision tracks mistakes") {
    // match: (2,4),(3,3),(4,2) among non-seeds; truth is identity
    std::vector<std::pair<std::size_t, std::size_t>> corr{{0, 0}, {1, 1}, {2, 4}, {3, 3}, {4, 2}};
    const MatchResult m = make_match(corr, {5, 5}, SeedSet({{0, 0}, {1, 1}}, 5, 5));
    std::vector<std::size_t> truth{0, 1, 2, 3, 4};
    const auto rows = best_matches(m, single(g), single(g), Measure::row_diff, std::size_t{3},
                                   std::span<const std::size_t>(truth));
    REQUIRE(rows.size() == 3);
    double running = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      running += truth[rows[k].a_vertex] == rows[k].b_vertex ? 1.0 : 0.0;
      CHECK(*rows[k].precision == doctest::Approx(running / static_cast<double>(k + 1)));
    }
  }
  SUBCASE("num truncates") {
    const auto rows = best_matches(identity_match(5), single(g), single(g), Measure::row_diff,
                                   std::size_t{2});
    CHECK(rows.size() == 2);
  }
}

TEST_CASE("core and junk identification curves") {
  auto stat = [](std::size_t a, double v) {
    VertexStat s;
    s.a_vertex = a;
    s.b_vertex = a;
    s.value = v;
    return s;
  };
  SUBCASE("cores ranked first give a flat curve at one") {
    std::vector<VertexStat> ranking{stat(0, 0.1), stat(1, 0.2), stat(2, 0.3), stat(3, 0.4),
                                    stat(4, 0.5)};
    const auto [core, junk] = core_junk_precision(ranking, 3, 2);
    for (double c : core) CHECK(c == 1.0);
    for (double j : junk) CHECK(j == 1.0);
  }
  SUBCASE("junk ranked last starts the junk curve at one") {
    std::vector<VertexStat> ranking{stat(0, 0.1), stat(2, 0.2), stat(1, 0.3)};
    const auto [core, junk] = core_junk_precision(ranking, 2, 1);
    CHECK(junk.size() == 1);
    CHECK(junk[0] == 0.0);  // last rank holds core vertex 1 -> junk curve 0
    const std::vector<VertexStat> better{stat(0, 0.1), stat(1, 0.2), stat(2, 0.3)};
    const auto [c2, j2] = core_junk_precision(better, 2, 1);
    CHECK(j2[0] == 1.0);
  }
  SUBCASE("random rankings hover near the core fraction") {
    Rng rng(5);
    double total = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      const auto perm = rng.permutation(10);
      std::vector<VertexStat> ranking;
      for (std::size_t k = 0; k < 10; ++k) ranking.push_back(stat(perm[k], 0.1 * k));
      const auto [core, junk] = core_junk_precision(ranking, 6, 4);
      total += core.back();
    }
    CHECK(std::fabs(total / trials - 0.6) < 0.05);
  }
  SUBCASE("count mismatch throws") {
    std::vector<VertexStat> ranking{stat(0, 0.1)};
    CHECK_THROWS_AS(core_junk_precision(ranking, 2, 2), InputError);
  }
}

TEST_CASE("discrepancy codes") {
  const Graph a = g5();
  std::vector<EdgeRecord> eb{{0, 1}, {1, 2}, {3, 4}};
  const Graph b = Graph::from_edges(eb, 5, false, false);
  const DenseMatrix d = discrepancy_matrix(identity_match(5), a, b);
  CHECK(d(0, 1) == 1.0);  // common
  CHECK(d(1, 4) == 2.0);  // only in the first graph
  CHECK(d(3, 4) == 3.0);  // only in the second
  CHECK(d(0, 2) == 0.0);  // neither
}

TEST_CASE("relabeling non-neighbors does not change the standardized statistic") {
  Rng rng(21);
  const std::size_t n = 7;
  const Graph a = random_graph(rng, n, 0.5);
  const Graph b = random_graph(rng, n, 0.5);
  const MatchResult m = identity_match(n);
  const double base = row_perm_stat(0, m, single(a), single(b), RowStatKind::diff, 5000, 9);
  // permute B's vertex labels away from vertex 0's neighborhood structure:
  // swapping two non-neighbors of sigma(0)=0 in B leaves the sampled row
  // distribution unchanged, up to Monte Carlo error
  std::vector<std::size_t> swap_perm(n);
  std::iota(swap_perm.begin(), swap_perm.end(), std::size_t{0});
  std::vector<std::size_t> non_neighbors;
  const DenseMatrix bd = b.adjacency().dense();
  for (std::size_t v = 1; v < n; ++v)
    if (bd(0, v) == 0.0) non_neighbors.push_back(v);
  if (non_neighbors.size() >= 2) {
    std::swap(swap_perm[non_neighbors[0]], swap_perm[non_neighbors[1]]);
    const Graph b2 = b.relabeled(swap_perm);
    std::vector<std::pair<std::size_t, std::size_t>> corr;
    for (std::size_t i = 0; i < n; ++i) corr.emplace_back(i, swap_perm[i]);
    const MatchResult m2 = make_match(corr, {n, n}, SeedSet{});
    const double other = row_perm_stat(0, m2, single(a), single(b2), RowStatKind::diff, 5000, 9);
    CHECK(base == doctest::Approx(other).epsilon(0.08));
  }
}
