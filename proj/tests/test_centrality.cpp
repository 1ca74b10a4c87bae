#include <gtest/gtest.h>

#include <numeric>

#include "depnet/centrality.hpp"
#include "depnet/error.hpp"
#include "depnet/generators.hpp"
#include "support.hpp"

using namespace depnet;
using namespace depnet::testing;

TEST(PageRank, TwoCycleIsUniform) {
  const auto r = pagerank(labeled({{"A", "B"}, {"B", "A"}}));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.scores[0], 0.5, 1e-12);
  EXPECT_NEAR(r.scores[1], 0.5, 1e-12);
}

TEST(PageRank, SingleNode) {
  const auto r = pagerank(build_graph(1, std::span<const Edge>{}));
  EXPECT_EQ(r.scores, std::vector<double>{1.0});
}

TEST(PageRank, EdgelessIsExactlyUniform) {
  const auto r = pagerank(build_graph(7, std::span<const Edge>{}));
  for (double s : r.scores) EXPECT_EQ(s, 1.0 / 7.0);
}

TEST(PageRank, SmallGraphValues) {
  // Solved exactly from the stationary equations of the damped walk:
  // A = C = 200/1599, B = 540/1599, D = 659/1599.
  const auto g = g1();
  const auto r = pagerank(g);
  EXPECT_NEAR(r.scores[*g.find("A")], 200.0 / 1599.0, 1e-10);
  EXPECT_NEAR(r.scores[*g.find("B")], 540.0 / 1599.0, 1e-10);
  EXPECT_NEAR(r.scores[*g.find("C")], 200.0 / 1599.0, 1e-10);
  EXPECT_NEAR(r.scores[*g.find("D")], 659.0 / 1599.0, 1e-10);
  EXPECT_GT(r.scores[3], r.scores[1]);
  EXPECT_GT(r.scores[1], r.scores[0]);
  EXPECT_EQ(r.scores[0], r.scores[2]);

  const auto dense = dense_pagerank(g);
  for (NodeId v = 0; v < 4; ++v) EXPECT_NEAR(r.scores[v], dense[v], 1e-9);
}

TEST(PageRank, MatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 1 + (seed * 13) % 100;
    const auto g = gnm_random({n, std::min<std::size_t>(n * (n - 1), 2 * n), seed});
    const auto r = pagerank(g);
    const auto dense = dense_pagerank(g);
    ASSERT_TRUE(r.converged);
    for (NodeId v = 0; v < n; ++v) ASSERT_NEAR(r.scores[v], dense[v], 1e-8) << "seed " << seed;
    EXPECT_NEAR(std::accumulate(r.scores.begin(), r.scores.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(PageRank, MassConservedEveryIteration) {
  const auto g = preferential_attachment({3000, 2, 3});
  for (int iterations = 1; iterations <= 12; ++iterations) {
    PageRankConfig cfg;
    cfg.max_iterations = iterations;
    const auto r = pagerank(g, cfg);
    EXPECT_NEAR(std::accumulate(r.scores.begin(), r.scores.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(PageRank, ReportsNonConvergence) {
  PageRankConfig cfg;
  cfg.max_iterations = 2;
  const auto r = pagerank(preferential_attachment({500, 2, 1}), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
}

TEST(PageRank, ThreadCountDoesNotChangeScores) {
  const auto g = preferential_attachment({20000, 3, 8});
  PageRankConfig one, many;
  many.threads = 8;
  EXPECT_EQ(pagerank(g, one).scores, pagerank(g, many).scores);
}

TEST(PageRank, Errors) {
  EXPECT_THROW(pagerank(DependencyGraph{}), EmptyInputError);
  PageRankConfig bad;
  bad.damping = 1.0;
  EXPECT_THROW(pagerank(g1(), bad), std::invalid_argument);
}

TEST(RankNodes, HubOrder) {
  const auto g = g1();
  const auto r = rank_nodes(g, Strategy::hub, 0);
  ASSERT_EQ(r.order.size(), 4u);
  EXPECT_EQ(g.label(r.order[0]), "B");
  EXPECT_EQ(g.label(r.order[1]), "D");
  // A and C tie at in-degree 0; smaller id first.
  EXPECT_EQ(g.label(r.order[2]), "A");
  EXPECT_EQ(g.label(r.order[3]), "C");
}

TEST(RankNodes, PageRankOrder) {
  const auto g = g1();
  const auto r = rank_nodes(g, Strategy::pagerank, 0);
  EXPECT_EQ(g.label(r.order[0]), "D");
  EXPECT_EQ(g.label(r.order[1]), "B");
  for (std::size_t i = 1; i < r.order.size(); ++i) EXPECT_GE(r.scores[r.order[i - 1]], r.scores[r.order[i]]);
}

TEST(RankNodes, RandomIsSeededPermutation) {
  const auto g = gnm_random({300, 900, 2});
  const auto a = rank_nodes(g, Strategy::random, 77);
  const auto b = rank_nodes(g, Strategy::random, 77);
  const auto c = rank_nodes(g, Strategy::random, 78);
  EXPECT_EQ(a.order, b.order);
  EXPECT_NE(a.order, c.order);
  auto sorted = a.order;
  std::sort(sorted.begin(), sorted.end());
  for (NodeId v = 0; v < sorted.size(); ++v) EXPECT_EQ(sorted[v], v);
}

TEST(RankNodes, ScaleInvariant) {
  const auto g = gnm_random({200, 800, 6});
  auto scores = pagerank(g).scores;
  const auto before = order_by_score(scores);
  for (double& s : scores) s *= 1024.0;
  EXPECT_EQ(order_by_score(scores), before);
}

TEST(Strategy, ParseAndPrint) {
  for (Strategy s : {Strategy::random, Strategy::hub, Strategy::pagerank}) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_FALSE(parse_strategy("degree"));
}
