#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "linkrec/rng.hpp"

namespace linkrec {

using NodeId = std::uint32_t;

/// Undirected edge, always stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge() = default;
  Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on a fixed node set.
///
/// Adjacency is held twice: a dense membership matrix for O(1) edge tests and
/// per-node sorted neighbor lists for ordered iteration and intersections.
/// Both are updated together by add_edge/remove_edge.
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n)
      : n_(n), adjacency_(n * n, 0), neighbors_(n) {}

  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g(n);
    for (const Edge& e : edges) g.add_edge(e.u, e.v);
    return g;
  }

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return m_; }

  bool has_edge(NodeId i, NodeId j) const {
    check_node(i);
    check_node(j);
    return adjacency_[index(i, j)] != 0;
  }

  /// Neighbors of i in ascending order.
  std::span<const NodeId> neighbors(NodeId i) const {
    check_node(i);
    return neighbors_[i];
  }

  std::size_t degree(NodeId i) const {
    check_node(i);
    return neighbors_[i].size();
  }

  void add_edge(NodeId i, NodeId j) {
    check_node(i);
    check_node(j);
    if (i == j) throw std::invalid_argument("add_edge: self-loop");
    if (adjacency_[index(i, j)] != 0)
      throw std::invalid_argument("add_edge: edge already present");
    adjacency_[index(i, j)] = 1;
    adjacency_[index(j, i)] = 1;
    insert_sorted(neighbors_[i], j);
    insert_sorted(neighbors_[j], i);
    ++m_;
    assert(consistent(i) && consistent(j));
  }

  void remove_edge(NodeId i, NodeId j) {
    check_node(i);
    check_node(j);
    if (i == j || adjacency_[index(i, j)] == 0)
      throw std::invalid_argument("remove_edge: edge not present");
    adjacency_[index(i, j)] = 0;
    adjacency_[index(j, i)] = 0;
    erase_sorted(neighbors_[i], j);
    erase_sorted(neighbors_[j], i);
    --m_;
    assert(consistent(i) && consistent(j));
  }

  /// All edges in lexicographic (u, v) order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (NodeId i = 0; i < n_; ++i)
      for (NodeId j : neighbors_[i])
        if (i < j) out.emplace_back(i, j);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.neighbors_ == b.neighbors_;
  }

 private:
  std::size_t index(NodeId i, NodeId j) const noexcept {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  void check_node(NodeId i) const {
    if (i >= n_) throw std::out_of_range("node id out of range");
  }

  static void insert_sorted(std::vector<NodeId>& list, NodeId v) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
  }

  static void erase_sorted(std::vector<NodeId>& list, NodeId v) {
    list.erase(std::lower_bound(list.begin(), list.end(), v));
  }

  bool consistent(NodeId i) const {
    if (adjacency_[index(i, i)] != 0) return false;
    for (NodeId j : neighbors_[i])
      if (adjacency_[index(i, j)] == 0 || adjacency_[index(j, i)] == 0) return false;
    return true;
  }

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<NodeId>> neighbors_;
};

/// |N_i ∩ N_j| by merging the sorted neighbor lists.
inline std::size_t common_neighbor_count(const Graph& g, NodeId i, NodeId j) {
  if (i == j) throw std::invalid_argument("common_neighbor_count: i == j");
  const auto a = g.neighbors(i);
  const auto b = g.neighbors(j);
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

struct ComponentLabeling {
  std::vector<std::uint32_t> labels;
  std::size_t count = 0;
};

/// Breadth-first labeling. Labels are assigned in order of each component's
/// smallest node id.
inline ComponentLabeling connected_components(const Graph& g) {
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  const std::size_t n = g.node_count();
  ComponentLabeling out;
  out.labels.assign(n, unset);
  std::deque<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    if (out.labels[s] != unset) continue;
    const auto label = static_cast<std::uint32_t>(out.count++);
    out.labels[s] = label;
    queue.push_back(s);
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (NodeId w : g.neighbors(u)) {
        if (out.labels[w] == unset) {
          out.labels[w] = label;
          queue.push_back(w);
        }
      }
    }
  }
  return out;
}

/// Uniform G(n, M) graph with exactly m edges. With require_connected the
/// draw is repeated until connected, up to max_retries attempts in total.
inline Graph new_random_graph(std::size_t n, std::size_t m, Engine& rng,
                              bool require_connected = true,
                              int max_retries = 100) {
  if (n == 0) throw std::invalid_argument("new_random_graph: n must be positive");
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m == 0 || m > pairs)
    throw std::invalid_argument("new_random_graph: edge count " + std::to_string(m) +
                                " infeasible for " + std::to_string(n) + " nodes");
  if (require_connected && m + 1 < n)
    throw std::invalid_argument("new_random_graph: too few edges to be connected");
  if (max_retries < 1) throw std::invalid_argument("new_random_graph: max_retries < 1");

  // Row-major index over pairs (i, j), i < j.
  auto decode = [n](std::uint64_t k) {
    NodeId i = 0;
    std::uint64_t row = n - 1;
    while (k >= row) {
      k -= row;
      --row;
      ++i;
    }
    return Edge(i, static_cast<NodeId>(i + 1 + k));
  };

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    // Floyd's sampling of m distinct pair indices.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(m * 2);
    for (std::uint64_t j = pairs - m; j < pairs; ++j) {
      const std::uint64_t t = uniform_index(rng, j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> sorted(chosen.begin(), chosen.end());
    std::sort(sorted.begin(), sorted.end());
    Graph g(n);
    for (std::uint64_t k : sorted) {
      const Edge e = decode(k);
      g.add_edge(e.u, e.v);
    }
    if (!require_connected || connected_components(g).count == 1) return g;
  }
  throw std::runtime_error("new_random_graph: no connected graph within " +
                           std::to_string(max_retries) + " attempts");
}

// Edge-list snapshot format:
//   # n=<n> m=<m> t=<t>
//   i j        (one line per edge, i < j, lexicographic order)

inline void write_edge_list(std::ostream& os, const Graph& g, std::size_t t) {
  os << "# n=" << g.node_count() << " m=" << g.edge_count() << " t=" << t << '\n';
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

struct EdgeListSnapshot {
  Graph graph;
  std::size_t t = 0;
};

inline EdgeListSnapshot read_edge_list(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("edge list: missing header");
  std::size_t n = 0, m = 0, t = 0;
  {
    std::istringstream hs(line);
    std::string hash, fn, fm, ft;
    hs >> hash >> fn >> fm >> ft;
    auto field = [](const std::string& tok, const char* key) -> std::size_t {
      const std::string prefix = std::string(key) + "=";
      if (tok.rfind(prefix, 0) != 0)
        throw std::runtime_error("edge list: malformed header field '" + tok + "'");
      return std::stoull(tok.substr(prefix.size()));
    };
    if (hash != "#") throw std::runtime_error("edge list: malformed header");
    n = field(fn, "n");
    m = field(fm, "m");
    t = field(ft, "t");
  }
  Graph g(n);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long i = -1, j = -1;
    if (!(ls >> i >> j) || i < 0 || j < 0 || i >= j ||
        static_cast<std::size_t>(j) >= n)
      throw std::runtime_error("edge list: malformed edge line '" + line + "'");
    g.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(j));
  }
  if (g.edge_count() != m)
    throw std::runtime_error("edge list: header edge count does not match body");
  return {std::move(g), t};
}

}  // namespace linkrec
