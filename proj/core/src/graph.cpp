#include "graphdm/graph.hpp"

#include <bit>
#include <string>

#include "graphdm/error.hpp"

namespace graphdm {

Graph::Graph(int n) : n_(n), m_(0), words_((n + 63) / 64) {
  if (n < 1) throw ParameterError("Graph: node count must be positive");
  bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

void Graph::check_pair(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_)
    throw ParameterError("Graph: node index out of range: (" +
                         std::to_string(u) + ", " + std::to_string(v) + ")");
  if (u == v) throw ParameterError("Graph: self-loops are not allowed");
}

bool Graph::add_edge(int u, int v) {
  check_pair(u, v);
  if (has_edge(u, v)) return false;
  bits_[static_cast<std::size_t>(u) * words_ + (v >> 6)] |= 1ULL << (v & 63);
  bits_[static_cast<std::size_t>(v) * words_ + (u >> 6)] |= 1ULL << (u & 63);
  ++m_;
  return true;
}

bool Graph::remove_edge(int u, int v) {
  check_pair(u, v);
  if (!has_edge(u, v)) return false;
  bits_[static_cast<std::size_t>(u) * words_ + (v >> 6)] &= ~(1ULL << (v & 63));
  bits_[static_cast<std::size_t>(v) * words_ + (u >> 6)] &= ~(1ULL << (u & 63));
  --m_;
  return true;
}

int Graph::degree(int u) const {
  const std::uint64_t* r = row(u);
  int d = 0;
  for (int w = 0; w < words_; ++w) d += std::popcount(r[w]);
  return d;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(m_));
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      if (has_edge(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph permute_nodes(const Graph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.node_count())
    throw ParameterError("permute_nodes: permutation size mismatch");
  Graph out(g.node_count());
  for (const auto& [u, v] : g.edges()) out.add_edge(perm[u], perm[v]);
  if (out.edge_count() != g.edge_count())
    throw ParameterError("permute_nodes: not a permutation");
  return out;
}

Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

std::vector<double> DegreeHistogram::normalized() const {
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i)
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return out;
}

DegreeHistogram degree_histogram(const Graph& g) {
  DegreeHistogram h;
  h.counts.assign(static_cast<std::size_t>(g.node_count()), 0);
  for (int u = 0; u < g.node_count(); ++u) ++h.counts[g.degree(u)];
  return h;
}

}  // namespace graphdm
