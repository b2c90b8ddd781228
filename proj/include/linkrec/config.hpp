#pragma once

// Key-value configuration files (INI syntax):
//
//   [simulation]   n, mean_degree, t_max, seed, record_every, init_lo, init_hi,
//                  snapshot_times, record_opinions, require_connected, max_retries
//   [recommender]  rho, beta, eta, epsilon, isolated_focal (displace | skip)
//   [dynamics]     k, gamma, alpha
//   [sweep]        replicates, seed_base
//   [axes]         <parameter> = <values>, at most two lines, outer axis first
//
// Lists are separated by spaces or commas. Unknown sections or keys are errors.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkrec/engine.hpp"
#include "linkrec/io.hpp"
#include "linkrec/sweep.hpp"

namespace linkrec {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using boost::property_tree::ptree;

inline std::vector<std::string> split_list(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

inline double parse_real(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

inline void check_keys(const ptree& section, const std::string& name,
                       const std::set<std::string>& allowed) {
  for (const auto& [key, child] : section) {
    if (!child.empty()) throw ConfigError("[" + name + "] must not contain subsections");
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
  }
}

inline void apply_simulation_section(const ptree& s, SimConfig& cfg) {
  check_keys(s, "simulation",
             {"n", "mean_degree", "t_max", "seed", "record_every", "init_lo", "init_hi",
              "snapshot_times", "record_opinions", "require_connected", "max_retries"});
  for (const auto& [key, child] : s) {
    const std::string v = child.data();
    const std::string k = "simulation." + key;
    if (key == "n") cfg.n = parse_u64(k, v);
    else if (key == "mean_degree") cfg.mean_degree = parse_real(k, v);
    else if (key == "t_max") cfg.t_max = parse_u64(k, v);
    else if (key == "seed") cfg.seed = parse_u64(k, v);
    else if (key == "record_every") cfg.record_every = parse_u64(k, v);
    else if (key == "init_lo") cfg.init_range.lo = parse_real(k, v);
    else if (key == "init_hi") cfg.init_range.hi = parse_real(k, v);
    else if (key == "record_opinions") cfg.record_opinions = parse_bool(k, v);
    else if (key == "require_connected") cfg.require_connected = parse_bool(k, v);
    else if (key == "max_retries") cfg.max_retries = static_cast<int>(parse_u64(k, v));
    else if (key == "snapshot_times") {
      cfg.snapshot_times.clear();
      for (const auto& tok : split_list(v)) cfg.snapshot_times.push_back(parse_u64(k, tok));
    }
  }
}

inline IsolatedFocal parse_isolated_focal(const std::string& v) {
  if (v == "displace") return IsolatedFocal::displace;
  if (v == "skip") return IsolatedFocal::skip;
  throw ConfigError("recommender.isolated_focal: expected displace or skip, got '" + v + "'");
}

inline void apply_recommender_section(const ptree& s, SimConfig& cfg) {
  check_keys(s, "recommender", {"rho", "beta", "eta", "epsilon", "isolated_focal"});
  for (const auto& [key, child] : s) {
    const std::string v = child.data();
    const std::string k = "recommender." + key;
    if (key == "isolated_focal") cfg.recommender.isolated_focal = parse_isolated_focal(v);
    else apply_parameter(cfg, key, parse_real(k, v));
  }
}

inline void apply_dynamics_section(const ptree& s, SimConfig& cfg) {
  check_keys(s, "dynamics", {"k", "gamma", "alpha"});
  for (const auto& [key, child] : s)
    apply_parameter(cfg, key, parse_real("dynamics." + key, child.data()));
}

inline ptree read_ini(std::istream& is) {
  ptree tree;
  try {
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return tree;
}

inline SimConfig sim_config_from_tree(const ptree& tree,
                                      const std::set<std::string>& extra_sections) {
  SimConfig cfg;
  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty())
      throw ConfigError("key '" + name + "' outside of any section");
    if (name == "simulation") apply_simulation_section(section, cfg);
    else if (name == "recommender") apply_recommender_section(section, cfg);
    else if (name == "dynamics") apply_dynamics_section(section, cfg);
    else if (!extra_sections.count(name)) throw ConfigError("unknown section [" + name + "]");
  }
  return cfg;
}

inline const char* isolated_focal_name(IsolatedFocal f) {
  return f == IsolatedFocal::skip ? "skip" : "displace";
}

inline void write_sim_sections(std::ostream& os, const SimConfig& cfg) {
  auto d = [](double v) { return format_double(v); };
  os << "[simulation]\n"
     << "n = " << cfg.n << '\n'
     << "mean_degree = " << d(cfg.mean_degree) << '\n'
     << "t_max = " << cfg.t_max << '\n'
     << "seed = " << cfg.seed << '\n'
     << "record_every = " << cfg.record_every << '\n'
     << "init_lo = " << d(cfg.init_range.lo) << '\n'
     << "init_hi = " << d(cfg.init_range.hi) << '\n'
     << "snapshot_times =";
  for (std::size_t t : cfg.snapshot_times) os << ' ' << t;
  os << '\n'
     << "record_opinions = " << (cfg.record_opinions ? "true" : "false") << '\n'
     << "require_connected = " << (cfg.require_connected ? "true" : "false") << '\n'
     << "max_retries = " << cfg.max_retries << "\n\n"
     << "[recommender]\n"
     << "rho = " << d(cfg.recommender.rho) << '\n'
     << "beta = " << d(cfg.recommender.beta) << '\n'
     << "eta = " << d(cfg.recommender.eta) << '\n'
     << "epsilon = " << d(cfg.recommender.epsilon) << '\n'
     << "isolated_focal = " << isolated_focal_name(cfg.recommender.isolated_focal) << "\n\n"
     << "[dynamics]\n"
     << "k = " << d(cfg.dynamics.influence) << '\n'
     << "gamma = " << d(cfg.dynamics.persistence) << '\n'
     << "alpha = " << d(cfg.dynamics.controversy) << '\n';
}

}  // namespace detail

/// Reads a single-run config; missing keys keep their defaults.
inline SimConfig read_sim_config(std::istream& is) {
  return detail::sim_config_from_tree(detail::read_ini(is), {});
}

inline SweepSpec read_sweep_spec(std::istream& is) {
  const auto tree = detail::read_ini(is);
  SweepSpec spec;
  spec.base = detail::sim_config_from_tree(tree, {"sweep", "axes"});
  if (const auto sweep = tree.get_child_optional("sweep")) {
    detail::check_keys(*sweep, "sweep", {"replicates", "seed_base"});
    for (const auto& [key, child] : *sweep) {
      const std::uint64_t v = detail::parse_u64("sweep." + key, child.data());
      if (key == "replicates") spec.replicates = v;
      else spec.seed_base = v;
    }
  }
  if (const auto axes = tree.get_child_optional("axes")) {
    for (const auto& [key, child] : *axes) {
      if (!child.empty()) throw ConfigError("[axes] must not contain subsections");
      SweepAxis axis{key, {}};
      for (const auto& tok : detail::split_list(child.data()))
        axis.values.push_back(detail::parse_real("axes." + key, tok));
      spec.axes.push_back(std::move(axis));
    }
  }
  return spec;
}

/// Writes a config that read_sim_config maps back to the same SimConfig.
inline void write_sim_config(std::ostream& os, const SimConfig& cfg) {
  detail::write_sim_sections(os, cfg);
}

inline void write_sweep_spec(std::ostream& os, const SweepSpec& spec) {
  detail::write_sim_sections(os, spec.base);
  os << "\n[sweep]\n"
     << "replicates = " << spec.replicates << '\n'
     << "seed_base = " << spec.seed_base << "\n\n"
     << "[axes]\n";
  for (const SweepAxis& axis : spec.axes) {
    os << axis.parameter << " =";
    for (double v : axis.values) os << ' ' << format_double(v);
    os << '\n';
  }
}

}  // namespace linkrec
