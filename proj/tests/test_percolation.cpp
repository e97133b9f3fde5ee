#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gm/errors.hpp"
#include "gm/percolation.hpp"
#include "gm/rng.hpp"

using namespace gm;

namespace {

// star with center 0 and three leaves
Graph star4() {
  std::vector<EdgeRecord> recs{{0, 1}, {0, 2}, {0, 3}};
  return Graph::from_edges(recs, 4, false, false);
}

LayeredGraph single(const Graph& g) { return LayeredGraph({g}); }

Graph random_graph(Rng& rng, std::size_t n, double p) {
  std::vector<EdgeRecord> recs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.next_double() < p) recs.push_back({i, j});
  return Graph::from_edges(recs, n, false, false);
}

}  // namespace

TEST_CASE("weighted mark increments") {
  CHECK(weighted_mark_increment(2, 2) == 1.0);
  CHECK(weighted_mark_increment(1, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(weighted_mark_increment(0, 5) == 0.0);
  CHECK(weighted_mark_increment(0, 0) == 0.0);
  CHECK(weighted_mark_increment(-2, -2) == 1.0);
}

TEST_CASE("star with the center seeded") {
  const Graph g = star4();
  const SeedSet seeds({{0, 0}}, 4, 4);
  SUBCASE("threshold 2 leaves every leaf pair below the bar") {
    const MatchResult m = gm_percolation(single(g), single(g), seeds, std::nullopt, 2.0);
    REQUIRE(m.corr().size() == 1);
    CHECK(m.corr()[0].a == 0);
    CHECK(m.corr()[0].seed);
  }
  SUBCASE("threshold 1 matches all leaves in tie order") {
    const MatchResult m = gm_percolation(single(g), single(g), seeds, std::nullopt, 1.0);
    REQUIRE(m.corr().size() == 4);
    for (const auto& p : m.corr()) CHECK(p.a == p.b);
    const auto& order = m.details()["match_order"];
    REQUIRE(order.size() == 3);
    CHECK(order[0][0] == 1);
    CHECK(order[0][1] == 1);
    CHECK(order[1][0] == 2);
    CHECK(order[2][0] == 3);
  }
}

TEST_CASE("a dominant similarity entry is matched first") {
  Rng rng(5);
  const Graph g = random_graph(rng, 6, 0.6);
  DenseMatrix sim(6, 6, 0.0);
  sim(2, 4) = 100.0;
  const MatchResult m = gm_percolation(single(g), single(g), SeedSet{}, sim, 1.0);
  const auto& order = m.details()["match_order"];
  REQUIRE(order.size() >= 1);
  CHECK(order[0][0] == 2);
  CHECK(order[0][1] == 4);
}

TEST_CASE("percolation requires a prior") {
  const Graph g = star4();
  CHECK_THROWS_AS(gm_percolation(single(g), single(g), SeedSet{}, std::nullopt, 2.0),
                  PreconditionError);
  DenseMatrix zeros(4, 4, 0.0);
  CHECK_THROWS_AS(gm_percolation(single(g), single(g), SeedSet{}, zeros, 2.0),
                  PreconditionError);
  CHECK_THROWS_AS(gm_expand_when_stuck(single(g), single(g), SeedSet{}, std::nullopt, 2.0),
                  PreconditionError);
}

TEST_CASE("matched pairs are never revised and respect the threshold") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 8;
    const Graph a = random_graph(rng, n, 0.5);
    const SeedSet seeds({{0, 0}, {1, 1}, {2, 2}}, n, n);
    const double r = 2.0;
    const MatchResult m = gm_percolation(single(a), single(a), seeds, std::nullopt, r);
    const auto& order = m.details()["match_order"];
    const auto& marks = m.details()["match_marks"];
    REQUIRE(order.size() == marks.size());
    std::set<std::size_t> rows, cols;
    for (std::size_t k = 0; k < order.size(); ++k) {
      CHECK(rows.insert(order[k][0].get<std::size_t>()).second);
      CHECK(cols.insert(order[k][1].get<std::size_t>()).second);
      CHECK(marks[k].get<double>() >= r);
    }
    // corr equals seeds plus the recorded order
    CHECK(m.corr().size() == seeds.size() + order.size());
  }
}

TEST_CASE("marks count matched neighboring pairs on unweighted graphs") {
  // verify the first matched pair's mark against a hand count over seeds
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 7 + rng.next_below(4);
    const Graph a = random_graph(rng, n, 0.45);
    const Graph b = random_graph(rng, n, 0.45);
    const SeedSet seeds({{0, 0}, {1, 1}}, n, n);
    const MatchResult m = gm_percolation(single(a), single(b), seeds, std::nullopt, 1.0);
    const auto& order = m.details()["match_order"];
    if (order.empty()) continue;
    const auto i = order[0][0].get<std::size_t>();
    const auto j = order[0][1].get<std::size_t>();
    const double mark = m.details()["match_marks"][0].get<double>();
    // count seeds (u,v) with i~u in A and v~j in B
    const DenseMatrix ad = a.adjacency().dense();
    const DenseMatrix bd = b.adjacency().dense();
    double count = 0;
    for (const auto& [u, v] : seeds.pairs()) count += ad(i, u) * bd(v, j);
    CHECK(mark == count);
  }
}

TEST_CASE("multilayer marks are the sum of per-layer marks") {
  Rng rng(31);
  const std::size_t n = 8;
  const Graph l1 = random_graph(rng, n, 0.4);
  const Graph l2 = random_graph(rng, n, 0.4);
  const SeedSet seeds({{0, 0}, {1, 1}, {2, 2}}, n, n);
  const LayeredGraph a({l1, l2});
  const MatchResult m = gm_percolation(a, a, seeds, std::nullopt, 1.0);
  const auto& order = m.details()["match_order"];
  if (!order.empty()) {
    const auto i = order[0][0].get<std::size_t>();
    const auto j = order[0][1].get<std::size_t>();
    const double mark = m.details()["match_marks"][0].get<double>();
    double count = 0;
    for (const Graph* g : {&l1, &l2}) {
      const DenseMatrix d = g->adjacency().dense();
      for (const auto& [u, v] : seeds.pairs()) count += d(i, u) * d(v, j);
    }
    CHECK(mark == count);
  }
}

TEST_CASE("expansion matches at least as much as plain percolation") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 10;
    const Graph a = random_graph(rng, n, 0.4);
    const Graph b = random_graph(rng, n, 0.4);
    const SeedSet seeds({{0, 0}, {1, 1}}, n, n);
    const MatchResult plain = gm_percolation(single(a), single(b), seeds, std::nullopt, 2.0);
    const MatchResult ews = gm_expand_when_stuck(single(a), single(b), seeds, std::nullopt, 2.0);
    CHECK(ews.corr().size() >= plain.corr().size());
    // the pre-stuck trajectory is identical, so plain's matches are kept
    std::set<std::pair<std::size_t, std::size_t>> ews_set;
    for (const auto& p : ews.corr()) ews_set.insert({p.a, p.b});
    for (const auto& p : plain.corr()) CHECK(ews_set.count({p.a, p.b}) == 1);
  }
}

TEST_CASE("expansion on the seeded star") {
  // with threshold 2 every leaf pair holds one mark; they all become
  // temporary seeds once, whose only neighboring pair (the matched center)
  // cannot gain, so the run ends with the seed alone, matching the plain run
  const Graph g = star4();
  const SeedSet seeds({{0, 0}}, 4, 4);
  const MatchResult plain = gm_percolation(single(g), single(g), seeds, std::nullopt, 2.0);
  const MatchResult ews = gm_expand_when_stuck(single(g), single(g), seeds, std::nullopt, 2.0);
  CHECK(ews.corr().size() == plain.corr().size());
  CHECK(ews.details()["expansion_rounds"].get<int>() >= 1);
}

TEST_CASE("a complete run is untouched by the expansion wrapper") {
  const Graph g = star4();
  const SeedSet seeds({{0, 0}}, 4, 4);
  const MatchResult plain = gm_percolation(single(g), single(g), seeds, std::nullopt, 1.0);
  const MatchResult ews = gm_expand_when_stuck(single(g), single(g), seeds, std::nullopt, 1.0);
  REQUIRE(plain.corr().size() == ews.corr().size());
  for (std::size_t k = 0; k < plain.corr().size(); ++k) {
    CHECK(plain.corr()[k].a == ews.corr()[k].a);
    CHECK(plain.corr()[k].b == ews.corr()[k].b);
  }
}

TEST_CASE("empty graphs with one seed return the seed alone") {
  const Graph e = Graph::from_edges({}, 3, false, false);
  const SeedSet seeds({{1, 1}}, 3, 3);
  const MatchResult m = gm_expand_when_stuck(single(e), single(e), seeds, std::nullopt, 2.0);
  REQUIRE(m.corr().size() == 1);
  CHECK(m.corr()[0].a == 1);
}

TEST_CASE("weighted graphs accumulate fractional marks") {
  // two seeds with weight-1 and weight-3 edges against weight-1 and weight-1
  std::vector<EdgeRecord> ea{{2, 0, 1.0, {}}, {2, 1, 3.0, {}}};
  std::vector<EdgeRecord> eb{{2, 0, 1.0, {}}, {2, 1, 1.0, {}}};
  const Graph a = Graph::from_edges(ea, 3, false, false);
  const Graph b = Graph::from_edges(eb, 3, false, false);
  const SeedSet seeds({{0, 0}, {1, 1}}, 3, 3);
  // pair (2,2): increment 1 from the (1,1)-weight pair, 1/3 from the (3,1)
  const MatchResult m = gm_percolation(single(a), single(b), seeds, std::nullopt, 1.3);
  REQUIRE(m.details()["match_order"].size() == 1);
  CHECK(m.details()["match_marks"][0].get<double>() == doctest::Approx(4.0 / 3.0));
}
