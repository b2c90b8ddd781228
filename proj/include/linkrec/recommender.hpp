#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkrec/graph.hpp"
#include "linkrec/rng.hpp"

namespace linkrec {

/// Link-recommendation parameters.
///
///   rho      weight of opinion similarity against structural similarity
///   beta     opinion-similarity exponent
///   eta      structural-similarity exponent
///   epsilon  noise floor added to both raw similarities, in (0, 1/2)
///
/// isolated_focal selects what a focal with no links does on its turn:
///   displace  accept the recommendation; one uniformly random pre-existing
///             edge of the graph is removed so the edge count is unchanged
///   skip      do nothing (isolation is then permanent for most settings)
enum class IsolatedFocal { displace, skip };

struct RecommenderParams {
  double rho = 0.5;
  double beta = 0.0;
  double eta = 0.0;
  double epsilon = 0.01;
  IsolatedFocal isolated_focal = IsolatedFocal::displace;

  void validate() const {
    if (!(rho >= 0.0 && rho <= 1.0))
      throw std::invalid_argument("rho must lie in [0, 1]");
    if (!(beta >= 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("beta must be finite and >= 0");
    if (!(eta >= 0.0) || !std::isfinite(eta))
      throw std::invalid_argument("eta must be finite and >= 0");
    if (!(epsilon > 0.0 && epsilon < 0.5))
      throw std::invalid_argument("epsilon must lie in (0, 0.5)");
  }
};

/// Recommendation probabilities for one focal node over its non-neighbors.
struct CandidateDistribution {
  NodeId focal = 0;
  std::vector<NodeId> candidates;
  std::vector<double> probabilities;
};

/// Raised when a focal node has no non-neighbors to recommend.
class EmptyCandidateSet : public std::runtime_error {
 public:
  explicit EmptyCandidateSet(NodeId focal)
      : std::runtime_error("focal node " + std::to_string(focal) +
                           " has no candidates") {}
};

/// Scratch buffers reused across rewires; one per simulation thread.
struct RecommenderWorkspace {
  std::vector<NodeId> candidates;
  std::vector<std::uint32_t> common;   // indexed by node id, kept zeroed
  std::vector<NodeId> touched;
  std::vector<double> structural;
  std::vector<double> opinion;
  std::vector<double> combined;
  std::vector<double> level_weight;    // structural weight per common-neighbor count
};

namespace detail {

inline void fill_candidates(const Graph& g, NodeId i, std::vector<NodeId>& out) {
  out.clear();
  const auto nbrs = g.neighbors(i);
  auto it = nbrs.begin();
  for (NodeId j = 0; j < g.node_count(); ++j) {
    if (it != nbrs.end() && *it == j) {
      ++it;
      continue;
    }
    if (j != i) out.push_back(j);
  }
}

inline void normalize(std::vector<double>& w) {
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
}

// Common-neighbor counts for every candidate via a two-hop walk from i.
inline void structural_probabilities(const Graph& g, NodeId i,
                                     const RecommenderParams& params,
                                     RecommenderWorkspace& ws) {
  const auto& cands = ws.candidates;
  ws.structural.resize(cands.size());
  if (params.eta == 0.0) {
    std::fill(ws.structural.begin(), ws.structural.end(), 1.0 / cands.size());
    return;
  }
  if (ws.common.size() != g.node_count()) ws.common.assign(g.node_count(), 0);
  ws.touched.clear();
  for (NodeId u : g.neighbors(i)) {
    for (NodeId w : g.neighbors(u)) {
      if (ws.common[w]++ == 0) ws.touched.push_back(w);
    }
  }
  std::uint32_t max_count = 0;
  for (NodeId j : cands) max_count = std::max(max_count, ws.common[j]);

  // Weights are taken relative to the largest base so the exponent cannot
  // overflow; the common factor cancels in the normalization.
  const double eps = params.epsilon;
  const double top = max_count * (1.0 - 2.0 * eps) + eps;
  ws.level_weight.resize(max_count + 1);
  for (std::uint32_t c = 0; c <= max_count; ++c)
    ws.level_weight[c] = std::pow((c * (1.0 - 2.0 * eps) + eps) / top, params.eta);

  for (std::size_t k = 0; k < cands.size(); ++k)
    ws.structural[k] = ws.level_weight[ws.common[cands[k]]];
  for (NodeId w : ws.touched) ws.common[w] = 0;
  normalize(ws.structural);
}

inline void opinion_probabilities(std::span<const double> x, NodeId i,
                                  const RecommenderParams& params,
                                  RecommenderWorkspace& ws) {
  const auto& cands = ws.candidates;
  ws.opinion.resize(cands.size());
  if (params.beta == 0.0) {
    std::fill(ws.opinion.begin(), ws.opinion.end(), 1.0 / cands.size());
    return;
  }
  const double eps = params.epsilon;
  const double xi = x[i];
  double bottom = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const double base = std::abs(xi - x[cands[k]]) * (1.0 - 2.0 * eps) + eps;
    ws.opinion[k] = base;
    bottom = std::min(bottom, base);
  }
  for (double& v : ws.opinion) v = std::pow(bottom / v, params.beta);
  normalize(ws.opinion);
}

inline void combined_probabilities(const Graph& g, std::span<const double> x,
                                   NodeId i, const RecommenderParams& params,
                                   RecommenderWorkspace& ws) {
  fill_candidates(g, i, ws.candidates);
  if (ws.candidates.empty()) throw EmptyCandidateSet(i);
  const double rho = params.rho;
  if (rho == 0.0) {
    structural_probabilities(g, i, params, ws);
    ws.combined = ws.structural;
    return;
  }
  if (rho == 1.0) {
    opinion_probabilities(x, i, params, ws);
    ws.combined = ws.opinion;
    return;
  }
  structural_probabilities(g, i, params, ws);
  opinion_probabilities(x, i, params, ws);
  ws.combined.resize(ws.candidates.size());
  for (std::size_t k = 0; k < ws.candidates.size(); ++k)
    ws.combined[k] = rho * ws.opinion[k] + (1.0 - rho) * ws.structural[k];
}

inline void check_opinions(const Graph& g, std::span<const double> x) {
  if (x.size() != g.node_count())
    throw std::invalid_argument("opinion vector size does not match graph");
}

}  // namespace detail

/// Non-neighbors of i, excluding i, in ascending order.
inline std::vector<NodeId> candidate_set(const Graph& g, NodeId i) {
  std::vector<NodeId> out;
  (void)g.degree(i);
  detail::fill_candidates(g, i, out);
  return out;
}

/// Triadic-closure distribution: proportional to [c(1-2ε)+ε]^η where c is the
/// number of common neighbors with the focal node.
inline CandidateDistribution structural_weights(const Graph& g, NodeId i,
                                                const RecommenderParams& params) {
  params.validate();
  RecommenderWorkspace ws;
  ws.candidates = candidate_set(g, i);
  if (ws.candidates.empty()) throw EmptyCandidateSet(i);
  detail::structural_probabilities(g, i, params, ws);
  return {i, std::move(ws.candidates), std::move(ws.structural)};
}

/// Homophily distribution: proportional to [|x_i - x_j|(1-2ε)+ε]^(-β).
inline CandidateDistribution opinion_weights(const Graph& g, std::span<const double> x,
                                             NodeId i, const RecommenderParams& params) {
  params.validate();
  detail::check_opinions(g, x);
  RecommenderWorkspace ws;
  ws.candidates = candidate_set(g, i);
  if (ws.candidates.empty()) throw EmptyCandidateSet(i);
  detail::opinion_probabilities(x, i, params, ws);
  return {i, std::move(ws.candidates), std::move(ws.opinion)};
}

/// rho * opinion_weights + (1 - rho) * structural_weights.
inline CandidateDistribution combined_distribution(const Graph& g, std::span<const double> x,
                                                   NodeId i, const RecommenderParams& params) {
  params.validate();
  detail::check_opinions(g, x);
  (void)g.degree(i);
  RecommenderWorkspace ws;
  detail::combined_probabilities(g, x, i, params, ws);
  return {i, std::move(ws.candidates), std::move(ws.combined)};
}

namespace detail {

inline std::size_t sample_index(std::span<const double> probabilities, Engine& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] <= 0.0) continue;
    cumulative += probabilities[k];
    last_positive = k;
    if (u < cumulative) return k;
  }
  // Rounding left the cumulative sum a hair below u.
  return last_positive;
}

}  // namespace detail

/// Inverse-CDF draw of one candidate.
inline NodeId sample_recommendation(const CandidateDistribution& dist, Engine& rng) {
  if (dist.candidates.empty() || dist.candidates.size() != dist.probabilities.size())
    throw std::invalid_argument("sample_recommendation: malformed distribution");
  return dist.candidates[detail::sample_index(dist.probabilities, rng)];
}

struct RewireOutcome {
  std::optional<Edge> added;
  std::optional<Edge> removed;
  bool skipped = false;
  bool displaced = false;  // removal came from the whole graph (isolated focal)
};

/// One focal turn: accept a sampled recommendation, then drop one of the
/// focal's pre-existing links uniformly at random. A focal adjacent to every
/// other node is skipped. An isolated focal follows params.isolated_focal.
inline RewireOutcome rewire_step(Graph& g, std::span<const double> x, NodeId i,
                                 const RecommenderParams& params, Engine& rng,
                                 RecommenderWorkspace& ws) {
  const std::size_t degree = g.degree(i);
  if (degree + 1 == g.node_count()) return {std::nullopt, std::nullopt, true, false};
  if (degree == 0 &&
      (params.isolated_focal == IsolatedFocal::skip || g.edge_count() == 0))
    return {std::nullopt, std::nullopt, true, false};

  detail::combined_probabilities(g, x, i, params, ws);
  const NodeId target = ws.candidates[detail::sample_index(ws.combined, rng)];

  if (degree == 0) {
    const std::vector<Edge> pool = g.edges();
    const Edge dropped = pool[uniform_index(rng, pool.size())];
    g.add_edge(i, target);
    g.remove_edge(dropped.u, dropped.v);
    return {Edge(i, target), dropped, false, true};
  }

  const NodeId dropped = g.neighbors(i)[uniform_index(rng, degree)];
  g.add_edge(i, target);
  g.remove_edge(i, dropped);
  return {Edge(i, target), Edge(i, dropped), false, false};
}

inline RewireOutcome rewire_step(Graph& g, std::span<const double> x, NodeId i,
                                 const RecommenderParams& params, Engine& rng) {
  params.validate();
  detail::check_opinions(g, x);
  RecommenderWorkspace ws;
  return rewire_step(g, x, i, params, rng, ws);
}

}  // namespace linkrec
