#include <gtest/gtest.h>

#include <numeric>

#include "linkrec/recommender.hpp"
#include "support/oracles.hpp"

using namespace linkrec;

namespace {

Graph make(std::size_t n, std::initializer_list<Edge> edges) {
  Graph g(n);
  for (const Edge& e : edges) g.add_edge(e.u, e.v);
  return g;
}

RecommenderParams params(double rho, double beta, double eta, double eps = 0.01) {
  RecommenderParams p;
  p.rho = rho;
  p.beta = beta;
  p.eta = eta;
  p.epsilon = eps;
  return p;
}

double total(const CandidateDistribution& d) {
  return std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0);
}

RecommenderParams random_params(Engine& rng) {
  return params(uniform01(rng), uniform_real(rng, 0, 8), uniform_real(rng, 0, 8),
                uniform_real(rng, 1e-3, 0.499));
}

std::vector<double> random_opinions(std::size_t n, Engine& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = uniform_real(rng, -10, 10);
  return x;
}

}  // namespace

TEST(CandidateSet, Examples) {
  EXPECT_TRUE(candidate_set(make(3, {{0, 1}, {1, 2}, {0, 2}}), 0).empty());
  EXPECT_EQ(candidate_set(make(3, {{0, 1}, {1, 2}}), 0), (std::vector<NodeId>{2}));
  EXPECT_EQ(candidate_set(Graph(4), 0), (std::vector<NodeId>{1, 2, 3}));
}

TEST(StructuralWeights, ZeroExponentIsUniform) {
  Engine rng(3);
  const Graph g = oracle::bernoulli_graph(20, 0.3, rng);
  const auto d = structural_weights(g, 0, params(0, 0, 0));
  for (double p : d.probabilities) EXPECT_DOUBLE_EQ(p, 1.0 / d.candidates.size());
}

TEST(StructuralWeights, HandEvaluatedExample) {
  // Focal 0 with neighbor 1; node 2 shares neighbor 1 (c = 1), node 3 shares none.
  const Graph g = make(4, {{0, 1}, {1, 2}});
  const auto d = structural_weights(g, 0, params(0, 0, 1, 0.01));
  ASSERT_EQ(d.candidates, (std::vector<NodeId>{2, 3}));
  EXPECT_NEAR(d.probabilities[0], 0.99, 1e-12);
  EXPECT_NEAR(d.probabilities[1], 0.01, 1e-12);
}

TEST(StructuralWeights, SingleCandidateGetsEverything) {
  const auto d = structural_weights(make(3, {{0, 1}}), 0, params(0, 0, 7.5, 0.2));
  ASSERT_EQ(d.candidates.size(), 1u);
  EXPECT_DOUBLE_EQ(d.probabilities[0], 1.0);
}

TEST(StructuralWeights, EmptyCandidatesAndBadParams) {
  const Graph k3 = make(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_THROW(structural_weights(k3, 0, params(0, 0, 1)), EmptyCandidateSet);
  EXPECT_THROW(structural_weights(Graph(3), 0, params(0, 0, 1, 0.0)), std::invalid_argument);
  EXPECT_THROW(structural_weights(Graph(3), 0, params(0, 0, 1, 0.5)), std::invalid_argument);
  EXPECT_THROW(structural_weights(Graph(3), 0, params(1.5, 0, 1)), std::invalid_argument);
  EXPECT_THROW(structural_weights(Graph(3), 0, params(0, -1, 1)), std::invalid_argument);
}

TEST(OpinionWeights, ZeroExponentIsUniform) {
  const std::vector<double> x{0, 3, -2, 9};
  const auto d = opinion_weights(Graph(4), x, 0, params(1, 0, 0));
  for (double p : d.probabilities) EXPECT_DOUBLE_EQ(p, 1.0 / 3);
}

TEST(OpinionWeights, HandEvaluatedExample) {
  // Raw weights 0.01^-1 = 100 and 0.99^-1, so the split is exactly 0.99 / 0.01.
  const std::vector<double> x{0, 0, 1};
  const auto d = opinion_weights(Graph(3), x, 0, params(1, 1, 0, 0.01));
  EXPECT_NEAR(d.probabilities[0], 0.99, 1e-12);
  EXPECT_NEAR(d.probabilities[1], 0.01, 1e-12);
}

TEST(OpinionWeights, IdenticalOpinionSingleCandidate) {
  const std::vector<double> x{4, 4};
  const auto d = opinion_weights(Graph(2), x, 0, params(1, 6, 0));
  EXPECT_DOUBLE_EQ(d.probabilities[0], 1.0);
}

TEST(OpinionWeights, SizeMismatchRejected) {
  const std::vector<double> x{0, 1};
  EXPECT_THROW(opinion_weights(Graph(3), x, 0, params(1, 1, 0)), std::invalid_argument);
}

TEST(CombinedDistribution, EndpointsMatchComponents) {
  Engine rng(17);
  const Graph g = oracle::bernoulli_graph(25, 0.2, rng);
  const auto x = random_opinions(25, rng);
  const auto h = opinion_weights(g, x, 3, params(1, 2.5, 1.5));
  const auto s = structural_weights(g, 3, params(0, 2.5, 1.5));
  EXPECT_EQ(combined_distribution(g, x, 3, params(1, 2.5, 1.5)).probabilities, h.probabilities);
  EXPECT_EQ(combined_distribution(g, x, 3, params(0, 2.5, 1.5)).probabilities, s.probabilities);
}

TEST(CombinedDistribution, ConvexCombinationExample) {
  // eta = 0 gives S = (0.5, 0.5); opinion gaps chosen so H = (0.9, 0.1) at beta = 1.
  const double eps = 0.01;
  const std::vector<double> x{0, 0, 0.08 / (1 - 2 * eps)};
  const auto h = opinion_weights(Graph(3), x, 0, params(1, 1, 0, eps));
  EXPECT_NEAR(h.probabilities[0], 0.9, 1e-12);
  const auto c = combined_distribution(Graph(3), x, 0, params(0.5, 1, 0, eps));
  EXPECT_NEAR(c.probabilities[0], 0.7, 1e-12);
  EXPECT_NEAR(c.probabilities[1], 0.3, 1e-12);
}

TEST(SampleRecommendation, DegenerateDistributions) {
  Engine rng(1);
  const CandidateDistribution single{0, {5}, {1.0}};
  const CandidateDistribution point{0, {2, 7}, {1.0, 0.0}};
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(sample_recommendation(single, rng), 5u);
    EXPECT_EQ(sample_recommendation(point, rng), 2u);
  }
  const CandidateDistribution last_only{0, {2, 7}, {0.0, 1.0}};
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_recommendation(last_only, rng), 7u);
  EXPECT_THROW(sample_recommendation(CandidateDistribution{}, rng), std::invalid_argument);
}

TEST(SampleRecommendation, EmpiricalFrequency) {
  Engine rng(123);
  const CandidateDistribution d{0, {1, 2}, {0.99, 0.01}};
  int first = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) first += sample_recommendation(d, rng) == 1;
  const double freq = first / double(draws);
  EXPECT_GE(freq, 0.985);
  EXPECT_LE(freq, 0.995);
}

TEST(SampleRecommendation, DeterministicGivenState) {
  const CandidateDistribution d{0, {1, 2, 3, 4}, {0.1, 0.2, 0.3, 0.4}};
  Engine a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_recommendation(d, a), sample_recommendation(d, b));
}

TEST(RewireStep, FullNeighborhoodSkips) {
  Graph g = make(3, {{0, 1}, {1, 2}, {0, 2}});
  const Graph before = g;
  Engine rng(1);
  const std::vector<double> x{0, 0, 0};
  const auto out = rewire_step(g, x, 0, params(0.5, 1, 1), rng);
  EXPECT_TRUE(out.skipped);
  EXPECT_FALSE(out.added || out.removed);
  EXPECT_EQ(g, before);
}

TEST(RewireStep, IsolatedFocalSkipsUnderSkipRule) {
  Graph g = make(4, {{1, 2}, {2, 3}});
  const Graph before = g;
  Engine rng(1);
  auto p = params(0.5, 1, 1);
  p.isolated_focal = IsolatedFocal::skip;
  const auto out = rewire_step(g, std::vector<double>(4, 0.0), 0, p, rng);
  EXPECT_TRUE(out.skipped);
  EXPECT_EQ(g, before);
}

TEST(RewireStep, IsolatedFocalDisplacesUnderDefaultRule) {
  Graph g = make(5, {{1, 2}, {2, 3}, {3, 4}});
  Engine rng(4);
  const auto out = rewire_step(g, std::vector<double>(5, 0.0), 0, params(0.5, 1, 1), rng);
  EXPECT_FALSE(out.skipped);
  EXPECT_TRUE(out.displaced);
  ASSERT_TRUE(out.added && out.removed);
  EXPECT_EQ(out.added->u, 0u);
  EXPECT_TRUE(g.has_edge(out.added->u, out.added->v));
  EXPECT_FALSE(g.has_edge(out.removed->u, out.removed->v));
  EXPECT_NE(*out.added, *out.removed);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.degree(0), 1u);
}

TEST(RewireStep, ForcedMovesOnPath) {
  Graph g = make(3, {{0, 1}, {1, 2}});
  Engine rng(77);
  const auto out = rewire_step(g, std::vector<double>{1, 2, 3}, 0, params(0.3, 2, 2), rng);
  EXPECT_FALSE(out.skipped);
  EXPECT_EQ(*out.added, Edge(0, 2));
  EXPECT_EQ(*out.removed, Edge(0, 1));
  EXPECT_EQ(g, make(3, {{0, 2}, {1, 2}}));
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(RewireStep, RemovalComesFromPreExistingLinks) {
  Engine rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    Graph g = oracle::bernoulli_graph(15, 0.3, rng);
    const NodeId focal = static_cast<NodeId>(uniform_index(rng, 15));
    if (g.degree(focal) == 0 || g.degree(focal) == 14) continue;
    const auto before = std::vector<NodeId>(g.neighbors(focal).begin(), g.neighbors(focal).end());
    const auto out = rewire_step(g, random_opinions(15, rng), focal, params(0.5, 2, 2), rng);
    ASSERT_TRUE(out.removed);
    const NodeId dropped = out.removed->u == focal ? out.removed->v : out.removed->u;
    EXPECT_TRUE(std::find(before.begin(), before.end(), dropped) != before.end());
    EXPECT_EQ(g.degree(focal), before.size());
  }
}

// Properties

TEST(RecommenderProperties, NormalizationOnRandomStates) {
  Engine rng(2718);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 40);
    const Graph g = oracle::bernoulli_graph(n, uniform01(rng), rng);
    const auto x = random_opinions(n, rng);
    const NodeId i = static_cast<NodeId>(uniform_index(rng, n));
    if (candidate_set(g, i).empty()) continue;
    const auto d = combined_distribution(g, x, i, random_params(rng));
    ASSERT_NEAR(total(d), 1.0, 1e-12);
    for (double p : d.probabilities) ASSERT_GE(p, 0.0);
    ASSERT_EQ(d.candidates, candidate_set(g, i));
  }
}

TEST(RecommenderProperties, StructuralMonotonicity) {
  Engine rng(55);
  for (int trial = 0; trial < 300; ++trial) {
    const Graph g = oracle::bernoulli_graph(20, 0.35, rng);
    const NodeId i = static_cast<NodeId>(uniform_index(rng, 20));
    if (candidate_set(g, i).empty()) continue;
    const auto p = params(0, 0, uniform_real(rng, 0.1, 4), uniform_real(rng, 1e-3, 0.45));
    const auto d = structural_weights(g, i, p);
    for (std::size_t a = 0; a < d.candidates.size(); ++a)
      for (std::size_t b = 0; b < d.candidates.size(); ++b) {
        const auto ca = common_neighbor_count(g, i, d.candidates[a]);
        const auto cb = common_neighbor_count(g, i, d.candidates[b]);
        if (ca > cb) {
          ASSERT_GT(d.probabilities[a], d.probabilities[b]);
        }
        if (ca == cb) {
          ASSERT_DOUBLE_EQ(d.probabilities[a], d.probabilities[b]);
        }
      }
  }
}

TEST(RecommenderProperties, OpinionMonotonicity) {
  Engine rng(56);
  for (int trial = 0; trial < 300; ++trial) {
    const Graph g = oracle::bernoulli_graph(20, 0.3, rng);
    const auto x = random_opinions(20, rng);
    const NodeId i = static_cast<NodeId>(uniform_index(rng, 20));
    if (candidate_set(g, i).empty()) continue;
    const auto p = params(1, uniform_real(rng, 0.1, 6), 0, uniform_real(rng, 1e-3, 0.45));
    const auto d = opinion_weights(g, x, i, p);
    for (std::size_t a = 0; a < d.candidates.size(); ++a)
      for (std::size_t b = 0; b < d.candidates.size(); ++b) {
        const double da = std::abs(x[i] - x[d.candidates[a]]);
        const double db = std::abs(x[i] - x[d.candidates[b]]);
        if (da + 1e-9 < db) {
          ASSERT_GT(d.probabilities[a], d.probabilities[b]);
        }
      }
  }
}

TEST(RecommenderProperties, MatchesDirectSummationOracle) {
  Engine rng(4242);
  int checked = 0;
  while (checked < 1000) {
    const std::size_t n = 2 + uniform_index(rng, 5);  // n <= 6
    const Graph g = oracle::bernoulli_graph(n, uniform01(rng), rng);
    const auto x = random_opinions(n, rng);
    const NodeId i = static_cast<NodeId>(uniform_index(rng, n));
    if (candidate_set(g, i).empty()) continue;
    const auto p = random_params(rng);
    const auto d = combined_distribution(g, x, i, p);
    const auto dense = oracle::direct_combined(g, x, i, p);
    for (std::size_t k = 0; k < d.candidates.size(); ++k)
      ASSERT_NEAR(d.probabilities[k], dense[d.candidates[k]], 1e-12);
    ++checked;
  }
}

TEST(RecommenderProperties, AffineInRho) {
  Engine rng(808);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = oracle::bernoulli_graph(30, 0.2, rng);
    const auto x = random_opinions(30, rng);
    const NodeId i = static_cast<NodeId>(uniform_index(rng, 30));
    if (candidate_set(g, i).empty()) continue;
    auto p = random_params(rng);
    p.rho = 0;
    const auto s = combined_distribution(g, x, i, p).probabilities;
    p.rho = 1;
    const auto h = combined_distribution(g, x, i, p).probabilities;
    for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      p.rho = rho;
      const auto c = combined_distribution(g, x, i, p).probabilities;
      for (std::size_t k = 0; k < c.size(); ++k)
        ASSERT_NEAR(c[k], rho * h[k] + (1 - rho) * s[k], 1e-14);
    }
  }
}

TEST(RecommenderProperties, EdgeCountConservedOverManyRewires) {
  Engine rng(1001);
  Graph g = new_random_graph(60, 240, rng, false);
  const std::size_t m = g.edge_count();
  auto x = random_opinions(60, rng);
  RecommenderWorkspace ws;
  for (IsolatedFocal rule : {IsolatedFocal::displace, IsolatedFocal::skip}) {
    auto p = params(0.5, 3, 3);
    p.isolated_focal = rule;
    for (int k = 0; k < 10000; ++k) {
      const NodeId i = static_cast<NodeId>(uniform_index(rng, 60));
      rewire_step(g, x, i, p, rng, ws);
      ASSERT_EQ(g.edge_count(), m);
    }
  }
}

TEST(RecommenderProperties, ExtremeExponentsStayFinite) {
  Engine rng(5);
  const Graph g = oracle::bernoulli_graph(50, 0.2, rng);
  const auto x = random_opinions(50, rng);
  const auto d = combined_distribution(g, x, 0, params(0.5, 8, 8, 1e-3));
  EXPECT_NEAR(total(d), 1.0, 1e-12);
  for (double p : d.probabilities) EXPECT_TRUE(std::isfinite(p));
}
