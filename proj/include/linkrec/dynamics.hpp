#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "linkrec/graph.hpp"
#include "linkrec/rng.hpp"

namespace linkrec {

using Opinions = std::vector<double>;

/// Opinion-update parameters.
struct DynamicsParams {
  double influence = 0.1;    // K, strength of social influence
  double persistence = 0.99; // gamma, per-step retention of one's own opinion
  double controversy = 0.3;  // alpha, slope of the tanh influence response

  void validate() const {
    if (!(influence >= 0.0) || !std::isfinite(influence))
      throw std::invalid_argument("K must be finite and >= 0");
    if (!(persistence >= 0.0 && persistence < 1.0))
      throw std::invalid_argument("gamma must lie in [0, 1)");
    if (!(controversy >= 0.0) || !std::isfinite(controversy))
      throw std::invalid_argument("alpha must be finite and >= 0");
  }

  /// K / (1 - gamma): no trajectory started inside [-bound, bound] leaves it.
  double opinion_bound() const { return influence / (1.0 - persistence); }
};

struct InitRange {
  double lo = -1.0;
  double hi = 1.0;
};

/// Synchronous update
///   x_i' = gamma x_i + K / k_i * sum_{j in N_i} tanh(alpha x_j)
/// with the social term taken as zero for isolated nodes. Neighbor sums run
/// in ascending node order.
inline Opinions opinion_step(const Graph& g, std::span<const double> x,
                             const DynamicsParams& params) {
  const std::size_t n = g.node_count();
  if (x.size() != n) throw std::invalid_argument("opinion vector size does not match graph");
  std::vector<double> pull(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(x[j])) throw std::invalid_argument("non-finite opinion");
    pull[j] = std::tanh(params.controversy * x[j]);
  }
  Opinions next(n);
  for (NodeId i = 0; i < n; ++i) {
    const auto nbrs = g.neighbors(i);
    double social = 0.0;
    if (!nbrs.empty()) {
      double sum = 0.0;
      for (NodeId j : nbrs) sum += pull[j];
      social = params.influence * (sum / static_cast<double>(nbrs.size()));
    }
    next[i] = params.persistence * x[i] + social;
  }
  return next;
}

/// Positive root of (1 - gamma) x = K tanh(alpha x), or 0 when only the
/// neutral root exists (K alpha <= 1 - gamma).
inline double consensus_fixed_point(const DynamicsParams& params) {
  params.validate();
  const double decay = 1.0 - params.persistence;
  const double K = params.influence;
  const double a = params.controversy;
  if (K * a <= decay) return 0.0;

  // K tanh(a x) / x - decay is strictly decreasing on x > 0, positive at 0+
  // and negative at the opinion bound.
  auto excess = [&](double x) { return K * std::tanh(a * x) / x - decay; };
  double lo = 0.0;
  double hi = K / decay;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// n i.i.d. uniform opinions on [lo, hi]. The range must sit inside the
/// opinion bound of `params`.
inline Opinions init_opinions(std::size_t n, InitRange range, Engine& rng,
                              const DynamicsParams& params) {
  const double bound = params.opinion_bound();
  if (!(range.lo <= range.hi) || !std::isfinite(range.lo) || !std::isfinite(range.hi))
    throw std::invalid_argument("init range must satisfy lo <= hi");
  if (range.lo < -bound || range.hi > bound)
    throw std::invalid_argument("init range exceeds the opinion bound K/(1-gamma)");
  Opinions x(n);
  for (double& v : x) v = uniform_real(rng, range.lo, range.hi);
  return x;
}

}  // namespace linkrec
