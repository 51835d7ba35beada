#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace graphdm {

/// Simple undirected graph on n nodes: symmetric adjacency, no self-loops.
///
/// The adjacency is stored as packed bit rows, which makes the motif census
/// (popcounts over neighborhood intersections) and induced-subgraph checks
/// cheap at the n ~ 100 scale this library targets. Graphs are value types:
/// copy freely, share across threads once constructed.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  int node_count() const { return n_; }
  int edge_count() const { return m_; }

  bool has_edge(int u, int v) const {
    return (bits_[static_cast<std::size_t>(u) * words_ +
                  static_cast<std::size_t>(v >> 6)] >>
            (v & 63)) &
           1ULL;
  }

  /// Adds the edge if absent; returns true when the graph changed.
  bool add_edge(int u, int v);
  /// Removes the edge if present; returns true when the graph changed.
  bool remove_edge(int u, int v);

  int degree(int u) const;

  /// All edges as (u, v) with u < v, in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;

  /// Packed neighborhood row of node u (words(), 64-bit blocks).
  const std::uint64_t* row(int u) const {
    return bits_.data() + static_cast<std::size_t>(u) * words_;
  }
  int words() const { return words_; }

  bool operator==(const Graph& other) const = default;

 private:
  void check_pair(int u, int v) const;

  int n_ = 0;
  int m_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Relabels nodes: node i of the input becomes perm[i] of the output.
Graph permute_nodes(const Graph& g, const std::vector<int>& perm);

/// Complete graph on n nodes.
Graph complete_graph(int n);

/// Histogram of node degrees: counts[d] = number of nodes with degree d,
/// for d in 0..n-1. Raw counts sum to n.
struct DegreeHistogram {
  std::vector<std::int64_t> counts;

  /// Histogram normalized to sum 1.
  std::vector<double> normalized() const;
};

DegreeHistogram degree_histogram(const Graph& g);

}  // namespace graphdm
