// linkrec: command-line front end for single runs, sweeps and helpers.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "linkrec/config.hpp"
#include "linkrec/dynamics.hpp"
#include "linkrec/engine.hpp"
#include "linkrec/graph.hpp"
#include "linkrec/io.hpp"
#include "linkrec/sweep.hpp"

namespace fs = std::filesystem;
using namespace linkrec;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("cannot create output directory " + dir.string());
}

template <class T>
T load_file(const std::string& path, T (*reader)(std::istream&)) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return reader(is);
}

struct Overrides {
  std::optional<std::size_t> n, t_max, record_every;
  std::optional<std::uint64_t> seed;
  std::optional<double> mean_degree, rho, beta, eta, epsilon, k, gamma, alpha, init_lo, init_hi;
  std::optional<std::string> isolated_focal;
  std::vector<std::size_t> snapshot_times;
  bool opinion_series = false;

  void apply(SimConfig& cfg) const {
    if (n) cfg.n = *n;
    if (t_max) cfg.t_max = *t_max;
    if (record_every) cfg.record_every = *record_every;
    if (seed) cfg.seed = *seed;
    if (mean_degree) cfg.mean_degree = *mean_degree;
    if (rho) cfg.recommender.rho = *rho;
    if (beta) cfg.recommender.beta = *beta;
    if (eta) cfg.recommender.eta = *eta;
    if (epsilon) cfg.recommender.epsilon = *epsilon;
    if (isolated_focal) cfg.recommender.isolated_focal = detail::parse_isolated_focal(*isolated_focal);
    if (k) cfg.dynamics.influence = *k;
    if (gamma) cfg.dynamics.persistence = *gamma;
    if (alpha) cfg.dynamics.controversy = *alpha;
    if (init_lo) cfg.init_range.lo = *init_lo;
    if (init_hi) cfg.init_range.hi = *init_hi;
    if (!snapshot_times.empty()) cfg.snapshot_times = snapshot_times;
    if (opinion_series) cfg.record_opinions = true;
  }
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--n", o.n, "number of nodes");
  cmd->add_option("--mean-degree", o.mean_degree, "target mean degree");
  cmd->add_option("--steps", o.t_max, "number of time steps (t_max)");
  cmd->add_option("--seed", o.seed, "root random seed");
  cmd->add_option("--record-every", o.record_every, "metrics sampling cadence");
  cmd->add_option("--rho", o.rho, "weight of opinion similarity");
  cmd->add_option("--beta", o.beta, "opinion-similarity exponent");
  cmd->add_option("--eta", o.eta, "structural-similarity exponent");
  cmd->add_option("--epsilon", o.epsilon, "similarity noise floor");
  cmd->add_option("--isolated-focal", o.isolated_focal, "displace | skip")
      ->check(CLI::IsMember({"displace", "skip"}));
  cmd->add_option("--k", o.k, "social influence K");
  cmd->add_option("--gamma", o.gamma, "opinion persistence");
  cmd->add_option("--alpha", o.alpha, "controversy");
  cmd->add_option("--init-lo", o.init_lo, "lower end of the initial opinion range");
  cmd->add_option("--init-hi", o.init_hi, "upper end of the initial opinion range");
  cmd->add_option("--snapshot-times", o.snapshot_times, "steps at which to dump the state");
  cmd->add_flag("--opinion-series", o.opinion_series, "write per-node opinions at recorded steps");
}

int run_command(const std::optional<std::string>& config_path, const Overrides& overrides,
                const fs::path& out) {
  SimConfig cfg = config_path ? load_file<SimConfig>(*config_path, read_sim_config) : SimConfig{};
  overrides.apply(cfg);
  cfg.validate();
  prepare_dir(out);
  {
    auto os = open_output(out / "config.resolved");
    write_sim_config(os, cfg);
  }

  const Trajectory traj = simulate(cfg);
  {
    auto os = open_output(out / "trajectory.csv");
    write_trajectory_csv(os, traj.rows);
  }
  if (cfg.record_opinions) {
    auto os = open_output(out / "opinion_series.csv");
    write_opinion_series_csv(os, traj.opinion_series);
  }
  if (!traj.snapshots.empty()) {
    prepare_dir(out / "snapshots");
    for (const Snapshot& s : traj.snapshots) {
      auto es = open_output(out / "snapshots" / ("edges_t" + std::to_string(s.t) + ".txt"));
      write_edge_list(es, s.graph, s.t);
      auto xs = open_output(out / "snapshots" / ("opinions_t" + std::to_string(s.t) + ".csv"));
      write_opinions_csv(xs, s.opinions);
    }
  }

  const MetricsRow& last = traj.rows.back();
  std::cout << "t=" << last.t << " polarization=" << format_double(last.polarization)
            << " radicalization=" << format_double(last.radicalization)
            << " n_components=" << last.n_components
            << " mean_opinion=" << format_double(last.mean_opinion)
            << " skips=" << traj.skip_count << " displacements=" << traj.displace_count
            << '\n';
  return 0;
}

int sweep_command(const std::string& spec_path, const fs::path& out,
                  std::optional<std::size_t> workers, std::optional<std::size_t> replicates,
                  std::optional<std::uint64_t> seed_base) {
  SweepSpec spec = load_file<SweepSpec>(spec_path, read_sweep_spec);
  if (replicates) spec.replicates = *replicates;
  if (seed_base) spec.seed_base = *seed_base;
  spec.validate();
  prepare_dir(out);
  {
    auto os = open_output(out / "config.resolved");
    write_sweep_spec(os, spec);
  }
  const SweepResult result = run_sweep(spec, workers.value_or(default_workers()));
  {
    auto os = open_output(out / "sweep_cells.csv");
    write_sweep_cells_csv(os, result);
  }
  {
    auto os = open_output(out / "sweep_raw.csv");
    write_sweep_raw_csv(os, result);
  }
  std::size_t failed = 0;
  for (const CellResult& c : result.cells) failed += c.failed;
  std::cout << result.cells.size() << " cells x " << spec.replicates << " replicates";
  if (failed) std::cout << ", " << failed << " failed";
  std::cout << '\n';
  return 0;
}

int validate_command(const std::string& path) {
  const SweepSpec spec = load_file<SweepSpec>(path, read_sweep_spec);
  std::ifstream is(path);
  std::stringstream text;
  text << is.rdbuf();
  const bool is_sweep = text.str().find("[axes]") != std::string::npos ||
                        text.str().find("[sweep]") != std::string::npos;
  if (is_sweep) {
    spec.validate();
    write_sweep_spec(std::cout, spec);
  } else {
    spec.base.validate();
    write_sim_config(std::cout, spec.base);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-evolving opinions and links under a mixed homophily / triadic-closure recommender"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one simulation");
  std::optional<std::string> run_config;
  std::string run_out;
  Overrides overrides;
  run->add_option("--config", run_config, "config file")->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "output directory")->required();
  add_overrides(run, overrides);

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  std::string sweep_spec;
  std::string sweep_out = "sweep_out";
  std::optional<std::size_t> workers, replicates;
  std::optional<std::uint64_t> seed_base;
  sweep->add_option("spec", sweep_spec, "sweep spec file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--workers", workers, "worker threads (default: $LINKREC_WORKERS or all cores)");
  sweep->add_option("--replicates", replicates, "override replicates per cell");
  sweep->add_option("--seed-base", seed_base, "override the sweep seed base");

  auto* fixed = app.add_subcommand("fixed-point", "print the consensus fixed point x*");
  DynamicsParams dyn;
  fixed->add_option("--k", dyn.influence, "social influence K");
  fixed->add_option("--gamma", dyn.persistence, "opinion persistence");
  fixed->add_option("--alpha", dyn.controversy, "controversy");

  auto* validate = app.add_subcommand("validate", "check a config or sweep file and print it resolved");
  std::string validate_path;
  validate->add_option("config", validate_path, "config file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(run_config, overrides, run_out);
    if (*sweep) return sweep_command(sweep_spec, sweep_out, workers, replicates, seed_base);
    if (*fixed) {
      std::cout << std::setprecision(10) << consensus_fixed_point(dyn) << '\n';
      return 0;
    }
    if (*validate) return validate_command(validate_path);
  } catch (const std::exception& e) {
    std::cerr << "linkrec: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
