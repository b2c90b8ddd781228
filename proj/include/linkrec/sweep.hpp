#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "linkrec/engine.hpp"
#include "linkrec/io.hpp"
#include "linkrec/rng.hpp"

namespace linkrec {

/// Parameters a sweep axis may vary. "eta_beta" is the joint axis that sets
/// eta and beta to the same value.
inline constexpr std::string_view kAxisParameters[] = {
    "rho", "beta", "eta", "eta_beta", "epsilon", "k", "gamma", "alpha",
    "n", "mean_degree", "t_max"};

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

struct SweepSpec {
  SimConfig base;
  std::vector<SweepAxis> axes;  // at most two; the first is the outer loop
  std::size_t replicates = 10;
  std::uint64_t seed_base = 1;

  std::size_t cell_count() const {
    std::size_t count = 1;
    for (const SweepAxis& a : axes) count *= a.values.size();
    return count;
  }

  bool has_axis(std::string_view name) const {
    return std::any_of(axes.begin(), axes.end(),
                       [&](const SweepAxis& a) { return a.parameter == name; });
  }

  void validate() const;
};

namespace detail {

inline std::size_t as_count(std::string_view name, double value) {
  if (!(value >= 0.0) || value != std::floor(value))
    throw std::invalid_argument(std::string(name) + " axis needs non-negative integers");
  return static_cast<std::size_t>(value);
}

}  // namespace detail

/// Sets one named parameter on a config.
inline void apply_parameter(SimConfig& cfg, std::string_view name, double value) {
  if (name == "rho") cfg.recommender.rho = value;
  else if (name == "beta") cfg.recommender.beta = value;
  else if (name == "eta") cfg.recommender.eta = value;
  else if (name == "eta_beta") cfg.recommender.eta = cfg.recommender.beta = value;
  else if (name == "epsilon") cfg.recommender.epsilon = value;
  else if (name == "k") cfg.dynamics.influence = value;
  else if (name == "gamma") cfg.dynamics.persistence = value;
  else if (name == "alpha") cfg.dynamics.controversy = value;
  else if (name == "n") cfg.n = detail::as_count(name, value);
  else if (name == "mean_degree") cfg.mean_degree = value;
  else if (name == "t_max") cfg.t_max = detail::as_count(name, value);
  else throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "'");
}

/// Config for one value of the joint eta = beta axis.
inline SimConfig joint_axis_binding(const SweepSpec& spec, double value) {
  if (!spec.has_axis("eta_beta"))
    throw std::invalid_argument("sweep has no joint eta_beta axis");
  SimConfig cfg = spec.base;
  apply_parameter(cfg, "eta_beta", value);
  return cfg;
}

inline void SweepSpec::validate() const {
  if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
  if (axes.size() > 2) throw std::invalid_argument("a sweep has at most two axes");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const auto& name = axes[a].parameter;
    if (std::find(std::begin(kAxisParameters), std::end(kAxisParameters), name) ==
        std::end(kAxisParameters))
      throw std::invalid_argument("unknown sweep parameter '" + name + "'");
    if (axes[a].values.empty())
      throw std::invalid_argument("sweep axis '" + name + "' has no values");
    for (std::size_t b = 0; b < a; ++b)
      if (axes[b].parameter == name)
        throw std::invalid_argument("duplicate sweep axis '" + name + "'");
  }
  if (has_axis("eta_beta") && (has_axis("eta") || has_axis("beta")))
    throw std::invalid_argument("joint eta_beta axis conflicts with an eta or beta axis");
  base.validate();
  for (const SweepAxis& axis : axes) {
    for (double v : axis.values) {
      SimConfig probe = base;
      apply_parameter(probe, axis.parameter, v);
      try {
        probe.validate();
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("sweep axis '" + axis.parameter + "' value " +
                                    format_double(v) + ": " + e.what());
      }
    }
  }
}

struct CellCoordinate {
  std::string parameter;
  double value = 0.0;
};

/// Axis values of one grid cell; the last axis varies fastest.
inline std::vector<CellCoordinate> cell_coordinates(const SweepSpec& spec, std::size_t cell) {
  std::vector<CellCoordinate> coords(spec.axes.size());
  for (std::size_t a = spec.axes.size(); a-- > 0;) {
    const auto& values = spec.axes[a].values;
    coords[a] = {spec.axes[a].parameter, values[cell % values.size()]};
    cell /= values.size();
  }
  return coords;
}

inline SimConfig cell_config(const SweepSpec& spec, std::size_t cell) {
  SimConfig cfg = spec.base;
  for (const CellCoordinate& c : cell_coordinates(spec, cell))
    apply_parameter(cfg, c.parameter, c.value);
  return cfg;
}

/// Replicate seed. Keyed on the cell's parameter values rather than its
/// position, so growing an axis leaves existing cells' seeds unchanged.
inline std::uint64_t replicate_seed(const SweepSpec& spec, std::size_t cell,
                                    std::size_t replicate) {
  std::uint64_t h = hash_combine(spec.seed_base, hash_name("sweep"));
  for (const CellCoordinate& c : cell_coordinates(spec, cell)) {
    h = hash_combine(h, hash_name(c.parameter));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(c.value + 0.0));
  }
  return hash_combine(h, replicate);
}

struct ReplicateResult {
  std::size_t cell = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  MetricsRow final_row;
  std::size_t skip_count = 0;
  std::size_t displace_count = 0;
};

struct Summary {
  double mean = 0.0;
  double se = 0.0;      // sample standard deviation / sqrt(count)
  double median = 0.0;
};

inline Summary summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) {
    s.mean = s.se = s.median = std::nan("");
    return s;
  }
  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

struct CellResult {
  std::size_t cell = 0;
  SimConfig config;
  std::size_t completed = 0;
  std::size_t failed = 0;
  Summary polarization;
  Summary radicalization;
  Summary n_components;
  Summary mean_opinion;
  Summary abs_mean_opinion;
};

struct SweepResult {
  std::vector<CellResult> cells;
  std::vector<ReplicateResult> raw;  // cell-major, replicate-minor
};

/// Worker count from LINKREC_WORKERS, else the hardware concurrency.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("LINKREC_WORKERS")) {
    try {
      const std::size_t w = parse_count(env);
      if (w > 0) return w;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline ReplicateResult run_replicate(const SweepSpec& spec, std::size_t cell,
                                     std::size_t replicate) {
  ReplicateResult r;
  r.cell = cell;
  r.replicate = replicate;
  r.seed = replicate_seed(spec, cell, replicate);
  try {
    SimConfig cfg = cell_config(spec, cell);
    cfg.seed = r.seed;
    // Only the final state is aggregated; recording options never touch the
    // random streams, so this does not change the outcome.
    cfg.record_every = cfg.t_max;
    cfg.snapshot_times.clear();
    cfg.record_opinions = false;
    const Trajectory traj = simulate(cfg);
    r.final_row = traj.rows.back();
    r.skip_count = traj.skip_count;
    r.displace_count = traj.displace_count;
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

inline CellResult aggregate_cell(const SweepSpec& spec, std::size_t cell,
                                 std::span<const ReplicateResult> reps) {
  CellResult c;
  c.cell = cell;
  c.config = cell_config(spec, cell);
  std::vector<double> pol, rad, ncc, mean, abs_mean;
  for (const ReplicateResult& r : reps) {
    if (!r.ok) {
      ++c.failed;
      continue;
    }
    ++c.completed;
    pol.push_back(r.final_row.polarization);
    rad.push_back(r.final_row.radicalization);
    ncc.push_back(static_cast<double>(r.final_row.n_components));
    mean.push_back(r.final_row.mean_opinion);
    abs_mean.push_back(std::abs(r.final_row.mean_opinion));
  }
  c.polarization = summarize(pol);
  c.radicalization = summarize(rad);
  c.n_components = summarize(ncc);
  c.mean_opinion = summarize(mean);
  c.abs_mean_opinion = summarize(abs_mean);
  return c;
}

/// Runs every (cell, replicate) pair on a pool of `workers` threads. Results
/// are placed by job index, so output is independent of scheduling.
inline SweepResult run_sweep(const SweepSpec& spec, std::size_t workers) {
  spec.validate();
  const std::size_t cells = spec.cell_count();
  const std::size_t jobs = cells * spec.replicates;
  SweepResult result;
  result.raw.resize(jobs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++)
      result.raw[job] = run_replicate(spec, job / spec.replicates, job % spec.replicates);
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(jobs, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t cell = 0; cell < cells; ++cell)
    result.cells.push_back(aggregate_cell(
        spec, cell,
        std::span<const ReplicateResult>(result.raw).subspan(cell * spec.replicates,
                                                            spec.replicates)));
  return result;
}

inline constexpr std::string_view kSweepCellsHeader =
    "cell,rho,beta,eta,epsilon,k,gamma,alpha,n,mean_degree,t_max,completed,failed,"
    "polarization_mean,polarization_se,radicalization_mean,radicalization_se,"
    "n_components_mean,n_components_se,n_components_median,"
    "mean_opinion_mean,mean_opinion_se,abs_mean_opinion_mean,abs_mean_opinion_median";

inline constexpr std::string_view kSweepRawHeader =
    "cell,replicate,seed,status,polarization,radicalization,n_components,mean_opinion,"
    "skip_count,displace_count,error";

inline void write_sweep_cells_csv(std::ostream& os, const SweepResult& result) {
  auto d = [](double v) { return format_double(v); };
  os << kSweepCellsHeader << '\n';
  for (const CellResult& c : result.cells) {
    const SimConfig& k = c.config;
    os << c.cell << ',' << d(k.recommender.rho) << ',' << d(k.recommender.beta) << ','
       << d(k.recommender.eta) << ',' << d(k.recommender.epsilon) << ','
       << d(k.dynamics.influence) << ',' << d(k.dynamics.persistence) << ','
       << d(k.dynamics.controversy) << ',' << k.n << ',' << d(k.mean_degree) << ','
       << k.t_max << ',' << c.completed << ',' << c.failed << ','
       << d(c.polarization.mean) << ',' << d(c.polarization.se) << ','
       << d(c.radicalization.mean) << ',' << d(c.radicalization.se) << ','
       << d(c.n_components.mean) << ',' << d(c.n_components.se) << ','
       << d(c.n_components.median) << ',' << d(c.mean_opinion.mean) << ','
       << d(c.mean_opinion.se) << ',' << d(c.abs_mean_opinion.mean) << ','
       << d(c.abs_mean_opinion.median) << '\n';
  }
}

inline void write_sweep_raw_csv(std::ostream& os, const SweepResult& result) {
  os << kSweepRawHeader << '\n';
  for (const ReplicateResult& r : result.raw) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    os << r.cell << ',' << r.replicate << ',' << r.seed << ',' << (r.ok ? "ok" : "failed")
       << ',';
    if (r.ok)
      os << format_double(r.final_row.polarization) << ','
         << format_double(r.final_row.radicalization) << ',' << r.final_row.n_components
         << ',' << format_double(r.final_row.mean_opinion);
    else
      os << ",,,";
    os << ',' << r.skip_count << ',' << r.displace_count << ',' << error << '\n';
  }
}

}  // namespace linkrec
