#pragma once

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "linkrec/engine.hpp"
#include "linkrec/metrics.hpp"

namespace linkrec {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::size_t parse_count(std::string_view s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("not a non-negative integer: '" + std::string(s) + "'");
  return v;
}

/// Minimal CSV table: comma-separated, no quoting (none of our fields need it).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return k;
    throw std::runtime_error("csv: missing column '" + std::string(name) + "'");
  }
};

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
  table.header = split_csv_line(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != table.header.size())
      throw std::runtime_error("csv: row width does not match header");
    table.rows.push_back(std::move(fields));
  }
  return table;
}

inline constexpr std::string_view kTrajectoryHeader =
    "t,polarization,radicalization,n_components,mean_opinion";

inline void write_trajectory_csv(std::ostream& os, std::span<const MetricsRow> rows) {
  os << kTrajectoryHeader << '\n';
  for (const MetricsRow& r : rows)
    os << r.t << ',' << format_double(r.polarization) << ','
       << format_double(r.radicalization) << ',' << r.n_components << ','
       << format_double(r.mean_opinion) << '\n';
}

inline std::vector<MetricsRow> read_trajectory_csv(std::istream& is) {
  const CsvTable table = read_csv(is);
  if (split_csv_line(kTrajectoryHeader) != table.header)
    throw std::runtime_error("trajectory csv: unexpected header");
  std::vector<MetricsRow> rows;
  for (const auto& f : table.rows)
    rows.push_back({parse_count(f[0]), parse_double(f[1]), parse_double(f[2]),
                    parse_count(f[3]), parse_double(f[4])});
  return rows;
}

inline void write_opinion_series_csv(std::ostream& os, std::span<const OpinionSample> series) {
  os << "t,node,opinion\n";
  for (const OpinionSample& s : series)
    for (std::size_t i = 0; i < s.opinions.size(); ++i)
      os << s.t << ',' << i << ',' << format_double(s.opinions[i]) << '\n';
}

inline void write_opinions_csv(std::ostream& os, std::span<const double> x) {
  os << "node,opinion\n";
  for (std::size_t i = 0; i < x.size(); ++i) os << i << ',' << format_double(x[i]) << '\n';
}

inline Opinions read_opinions_csv(std::istream& is) {
  const CsvTable table = read_csv(is);
  const std::size_t node_col = table.column("node");
  const std::size_t op_col = table.column("opinion");
  Opinions x(table.rows.size());
  for (const auto& f : table.rows) {
    const std::size_t i = parse_count(f[node_col]);
    if (i >= x.size()) throw std::runtime_error("opinions csv: node id out of range");
    x[i] = parse_double(f[op_col]);
  }
  return x;
}

}  // namespace linkrec
