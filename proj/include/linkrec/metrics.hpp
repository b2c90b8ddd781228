#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

#include "linkrec/graph.hpp"

namespace linkrec {

struct MetricsRow {
  std::size_t t = 0;
  double polarization = 0.0;
  double radicalization = 0.0;
  std::size_t n_components = 0;
  double mean_opinion = 0.0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

namespace detail {
inline void require_nonempty(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("metrics need at least one opinion");
}
}  // namespace detail

inline double mean_opinion(std::span<const double> x) {
  detail::require_nonempty(x);
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

/// Population standard deviation (divisor n).
inline double polarization(std::span<const double> x) {
  const double mu = mean_opinion(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

/// Mean absolute opinion.
inline double radicalization(std::span<const double> x) {
  detail::require_nonempty(x);
  double sum = 0.0;
  for (double v : x) sum += std::abs(v);
  return sum / static_cast<double>(x.size());
}

inline std::size_t component_count(const Graph& g) {
  return connected_components(g).count;
}

inline MetricsRow measure(std::size_t t, const Graph& g, std::span<const double> x) {
  return {t, polarization(x), radicalization(x), component_count(g), mean_opinion(x)};
}

}  // namespace linkrec
