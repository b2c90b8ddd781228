#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkrec/dynamics.hpp"
#include "linkrec/graph.hpp"
#include "linkrec/metrics.hpp"
#include "linkrec/recommender.hpp"
#include "linkrec/rng.hpp"

namespace linkrec {

struct SimConfig {
  std::size_t n = 100;
  double mean_degree = 10.0;
  std::size_t t_max = 1200;
  std::uint64_t seed = 1;
  RecommenderParams recommender;
  DynamicsParams dynamics;
  InitRange init_range;
  std::size_t record_every = 10;
  std::vector<std::size_t> snapshot_times;
  bool record_opinions = false;
  bool require_connected = true;
  int max_retries = 100;

  /// m = round(n <k> / 2).
  std::size_t edge_count() const {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n) * mean_degree / 2.0));
  }

  void validate() const {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (!(mean_degree > 0.0) || !std::isfinite(mean_degree))
      throw std::invalid_argument("mean_degree must be positive");
    const std::size_t m = edge_count();
    if (m == 0 || m > n * (n - 1) / 2)
      throw std::invalid_argument("mean_degree gives an infeasible edge count");
    if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
    if (record_every < 1) throw std::invalid_argument("record_every must be at least 1");
    if (max_retries < 1) throw std::invalid_argument("max_retries must be at least 1");
    for (std::size_t t : snapshot_times)
      if (t > t_max) throw std::invalid_argument("snapshot time beyond t_max");
    recommender.validate();
    dynamics.validate();
    const double bound = dynamics.opinion_bound();
    if (!(init_range.lo <= init_range.hi) || init_range.lo < -bound || init_range.hi > bound)
      throw std::invalid_argument("init range must satisfy -K/(1-gamma) <= lo <= hi <= K/(1-gamma)");
  }
};

struct StepStats {
  std::size_t rewires = 0;
  std::size_t skips = 0;
  std::size_t displacements = 0;  // rewires by isolated focals
};

struct Snapshot {
  std::size_t t = 0;
  Graph graph;
  Opinions opinions;
};

struct OpinionSample {
  std::size_t t = 0;
  Opinions opinions;
};

struct Trajectory {
  std::vector<MetricsRow> rows;
  Graph final_graph;
  Opinions final_opinions;
  std::size_t skip_count = 0;
  std::size_t displace_count = 0;
  std::vector<OpinionSample> opinion_series;
  std::vector<Snapshot> snapshots;
};

/// Random streams consumed by the rewiring rounds. Initialization draws
/// come from separate streams (see Simulation).
struct StepStreams {
  Engine order;
  Engine sampling;

  static StepStreams from_seed(std::uint64_t seed) {
    return {make_stream(seed, "round-order"), make_stream(seed, "focal-sampling")};
  }
};

/// One time step: every node rewires once in a fresh random order, each
/// rewire seeing the previous ones, then all opinions update together.
inline StepStats step(Graph& g, Opinions& x, const SimConfig& cfg, StepStreams& streams,
                      RecommenderWorkspace& ws) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  shuffle(std::span<NodeId>(order), streams.order);

  StepStats stats;
  for (NodeId focal : order) {
    const RewireOutcome outcome =
        rewire_step(g, x, focal, cfg.recommender, streams.sampling, ws);
    if (outcome.skipped)
      ++stats.skips;
    else
      ++stats.rewires;
    if (outcome.displaced) ++stats.displacements;
  }
  x = opinion_step(g, x, cfg.dynamics);
  return stats;
}

/// Owns the state of one run.
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg)
      : cfg_(cfg), streams_(StepStreams::from_seed(cfg.seed)) {
    cfg_.validate();
    Engine graph_rng = make_stream(cfg_.seed, "graph-init");
    Engine opinion_rng = make_stream(cfg_.seed, "opinion-init");
    graph_ = new_random_graph(cfg_.n, cfg_.edge_count(), graph_rng,
                              cfg_.require_connected, cfg_.max_retries);
    opinions_ = init_opinions(cfg_.n, cfg_.init_range, opinion_rng, cfg_.dynamics);
  }

  /// Start from a given state; only the rewiring streams derive from the seed.
  Simulation(const SimConfig& cfg, Graph g, Opinions x)
      : cfg_(cfg), graph_(std::move(g)), opinions_(std::move(x)),
        streams_(StepStreams::from_seed(cfg.seed)) {
    cfg_.recommender.validate();
    cfg_.dynamics.validate();
    if (opinions_.size() != graph_.node_count())
      throw std::invalid_argument("opinion vector size does not match graph");
  }

  StepStats advance() {
    const StepStats s = step(graph_, opinions_, cfg_, streams_, workspace_);
    ++t_;
    skips_ += s.skips;
    displacements_ += s.displacements;
    return s;
  }

  const SimConfig& config() const noexcept { return cfg_; }
  const Graph& graph() const noexcept { return graph_; }
  const Opinions& opinions() const noexcept { return opinions_; }
  std::size_t time() const noexcept { return t_; }
  std::size_t skip_count() const noexcept { return skips_; }
  std::size_t displace_count() const noexcept { return displacements_; }

 private:
  SimConfig cfg_;
  Graph graph_;
  Opinions opinions_;
  StepStreams streams_;
  RecommenderWorkspace workspace_;
  std::size_t t_ = 0;
  std::size_t skips_ = 0;
  std::size_t displacements_ = 0;
};

/// Runs cfg.t_max steps. Rows are recorded at t = 0, every record_every
/// steps, and at t_max.
inline Trajectory simulate(const SimConfig& cfg) {
  Simulation sim(cfg);
  Trajectory traj;
  auto snapshot_due = [&](std::size_t t) {
    return std::find(cfg.snapshot_times.begin(), cfg.snapshot_times.end(), t) !=
           cfg.snapshot_times.end();
  };
  auto observe = [&](std::size_t t) {
    if (t % cfg.record_every == 0 || t == cfg.t_max) {
      traj.rows.push_back(measure(t, sim.graph(), sim.opinions()));
      if (cfg.record_opinions) traj.opinion_series.push_back({t, sim.opinions()});
    }
    if (snapshot_due(t)) traj.snapshots.push_back({t, sim.graph(), sim.opinions()});
  };

  observe(0);
  for (std::size_t t = 1; t <= cfg.t_max; ++t) {
    sim.advance();
    observe(t);
  }
  traj.final_graph = sim.graph();
  traj.final_opinions = sim.opinions();
  traj.skip_count = sim.skip_count();
  traj.displace_count = sim.displace_count();
  return traj;
}

}  // namespace linkrec
