#include "graphdm/census.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "graphdm/error.hpp"

namespace graphdm {

namespace {

// Key = degrees of the induced subgraph, sorted ascending, packed 4 bits
// each, with the subset size in the top nibble. Distinct for all nine
// connected motifs on <= 4 nodes.
int degree_key(const int* deg, int k) {
  int sorted[4] = {0, 0, 0, 0};
  std::copy(deg, deg + k, sorted);
  // Connected subsets have no zero degrees, so sorting the zero-padded
  // array right-aligns the multiset.
  std::sort(sorted, sorted + 4);
  return (k << 16) | (sorted[0] << 12) | (sorted[1] << 8) | (sorted[2] << 4) |
         sorted[3];
}

// key -> motif slot, -1 for disconnected/unknown.
int motif_from_key(int key) {
  switch (key) {
    case (2 << 16) | (0 << 12) | (0 << 8) | (1 << 4) | 1:
      return static_cast<int>(MotifId::kEdge);
    case (3 << 16) | (0 << 12) | (1 << 8) | (1 << 4) | 2:
      return static_cast<int>(MotifId::kPath3);
    case (3 << 16) | (0 << 12) | (2 << 8) | (2 << 4) | 2:
      return static_cast<int>(MotifId::kTriangle);
    case (4 << 16) | (1 << 12) | (1 << 8) | (2 << 4) | 2:
      return static_cast<int>(MotifId::kPath4);
    case (4 << 16) | (1 << 12) | (1 << 8) | (1 << 4) | 3:
      return static_cast<int>(MotifId::kStar4);
    case (4 << 16) | (2 << 12) | (2 << 8) | (2 << 4) | 2:
      return static_cast<int>(MotifId::kCycle4);
    case (4 << 16) | (1 << 12) | (2 << 8) | (2 << 4) | 3:
      return static_cast<int>(MotifId::kPaw);
    case (4 << 16) | (2 << 12) | (2 << 8) | (3 << 4) | 3:
      return static_cast<int>(MotifId::kDiamond);
    case (4 << 16) | (3 << 12) | (3 << 8) | (3 << 4) | 3:
      return static_cast<int>(MotifId::kK4);
    default:
      return -1;
  }
}

void classify_subset(const Graph& g, const int* sub, int k,
                     MotifCounts& out) {
  int deg[4] = {0, 0, 0, 0};
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (g.has_edge(sub[a], sub[b])) {
        ++deg[a];
        ++deg[b];
      }
    }
  }
  const int slot = motif_from_key(degree_key(deg, k));
  // ESU only reaches connected subsets, so the key must resolve.
  if (slot < 0)
    throw NumericError("census: enumeration reached a non-motif subset");
  ++out.counts[slot];
}

std::int64_t binom(std::int64_t n, int k) {
  if (n < k) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Bitset helpers over g.words() blocks.
inline void set_bit(std::uint64_t* s, int v) { s[v >> 6] |= 1ULL << (v & 63); }
inline bool test_bit(const std::uint64_t* s, int v) {
  return (s[v >> 6] >> (v & 63)) & 1ULL;
}

// ESU extension step. sub holds the current connected subset, ext the
// extension candidates (neighbors of the subset, all > root, not already
// excluded), banned the subset plus every node ever offered as a candidate
// along this branch (prevents duplicate enumeration).
void esu_extend(const Graph& g, int* sub, int depth,
                const std::vector<std::uint64_t>& ext,
                const std::vector<std::uint64_t>& banned, int root,
                MotifCounts& out) {
  const int words = g.words();
  if (depth >= 2) classify_subset(g, sub, depth, out);
  if (depth == 4) return;

  // Everything offered at this level (or before) is off-limits below, which
  // is what makes each connected subset come up exactly once.
  std::vector<std::uint64_t> child_banned(words);
  for (int x = 0; x < words; ++x) child_banned[x] = banned[x] | ext[x];

  // Mask of nodes strictly greater than the enumeration root.
  std::vector<std::uint64_t> above_root(words, ~0ULL);
  for (int u = 0; u <= root; ++u)
    above_root[u >> 6] &= ~(1ULL << (u & 63));

  std::vector<std::uint64_t> remaining = ext;
  std::vector<std::uint64_t> child_ext(words);
  for (int w = 0; w < words; ++w) {
    while (remaining[w]) {
      const int v = (w << 6) + std::countr_zero(remaining[w]);
      remaining[w] &= remaining[w] - 1;

      sub[depth] = v;
      // Child candidates: what is left here plus the exclusive new
      // neighbors of v, all beyond the root.
      const std::uint64_t* nv = g.row(v);
      for (int x = 0; x < words; ++x)
        child_ext[x] = remaining[x] | (nv[x] & ~child_banned[x] & above_root[x]);
      esu_extend(g, sub, depth + 1, child_ext, child_banned, root, out);
    }
  }
}

}  // namespace

int motif_size(MotifId id) {
  switch (id) {
    case MotifId::kEdge:
      return 2;
    case MotifId::kPath3:
    case MotifId::kTriangle:
      return 3;
    default:
      return 4;
  }
}

std::string_view motif_name(MotifId id) {
  switch (id) {
    case MotifId::kEdge:
      return "edge";
    case MotifId::kPath3:
      return "path3";
    case MotifId::kTriangle:
      return "triangle";
    case MotifId::kPath4:
      return "path4";
    case MotifId::kStar4:
      return "star4";
    case MotifId::kCycle4:
      return "cycle4";
    case MotifId::kPaw:
      return "paw";
    case MotifId::kDiamond:
      return "diamond";
    case MotifId::kK4:
      return "k4";
  }
  return "?";
}

Graph motif_instance(MotifId id) {
  auto from_edges = [](int k, std::initializer_list<std::pair<int, int>> es) {
    Graph g(k);
    for (auto [u, v] : es) g.add_edge(u, v);
    return g;
  };
  switch (id) {
    case MotifId::kEdge:
      return from_edges(2, {{0, 1}});
    case MotifId::kPath3:
      return from_edges(3, {{0, 1}, {1, 2}});
    case MotifId::kTriangle:
      return from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    case MotifId::kPath4:
      return from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    case MotifId::kStar4:
      return from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    case MotifId::kCycle4:
      return from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    case MotifId::kPaw:
      return from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
    case MotifId::kDiamond:
      return from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {2, 3}});
    case MotifId::kK4:
      return from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  }
  throw ParameterError("motif_instance: bad motif id");
}

DensityVector normalize_counts(const MotifCounts& counts) {
  DensityVector d;
  for (int i = 0; i < kMotifCount; ++i) {
    const auto id = static_cast<MotifId>(i);
    d.rho[i] = static_cast<double>(counts.counts[i]) /
               static_cast<double>(binom(counts.n, motif_size(id)));
  }
  return d;
}

MotifCounts census_counts(const Graph& g) {
  const int n = g.node_count();
  if (n < 4)
    throw DataError("census: graphs must have n >= 4 nodes, got n=" +
                    std::to_string(n));
  MotifCounts out;
  out.n = n;
  const int words = g.words();
  int sub[4];
  for (int root = 0; root < n; ++root) {
    sub[0] = root;
    std::vector<std::uint64_t> ext(words, 0);
    std::vector<std::uint64_t> banned(words, 0);
    set_bit(banned.data(), root);
    const std::uint64_t* nr = g.row(root);
    for (int w = 0; w < words; ++w) ext[w] = nr[w];
    for (int u = 0; u <= root; ++u) ext[u >> 6] &= ~(1ULL << (u & 63));
    esu_extend(g, sub, 1, ext, banned, root, out);
  }
  return out;
}

DensityVector census(const Graph& g) { return normalize_counts(census_counts(g)); }

MotifCounts census_counts_fast(const Graph& g) {
  const int n = g.node_count();
  if (n < 4)
    throw DataError("census: graphs must have n >= 4 nodes, got n=" +
                    std::to_string(n));
  const int words = g.words();

  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) deg[v] = g.degree(v);

  const auto edges = g.edges();
  const std::int64_t m = static_cast<std::int64_t>(edges.size());

  // Per-edge common-neighbor counts drive triangles, diamonds and K4s.
  std::int64_t tri3 = 0;        // 3 * triangle count
  std::int64_t dia_pairs = 0;   // sum over edges of C(cn, 2)
  std::int64_t k4_flags = 0;    // sum over edges of edges within the common
                                // neighborhood (each K4 counted 6 times)
  std::int64_t p4_mid = 0;      // sum over edges of (d_u - 1)(d_v - 1)
  std::vector<std::int64_t> tri_at(n, 0);  // 2 * triangles at node v

  std::vector<std::uint64_t> common(words);
  std::vector<std::uint64_t> rest(words);
  for (const auto& [u, v] : edges) {
    const std::uint64_t* ru = g.row(u);
    const std::uint64_t* rv = g.row(v);
    std::int64_t cn = 0;
    for (int w = 0; w < words; ++w) {
      common[w] = ru[w] & rv[w];
      cn += std::popcount(common[w]);
    }
    tri3 += cn;
    dia_pairs += cn * (cn - 1) / 2;
    p4_mid += static_cast<std::int64_t>(deg[u] - 1) * (deg[v] - 1);
    tri_at[u] += cn;
    tri_at[v] += cn;
    // Edges among the common neighbors: pop nodes in ascending order and
    // count adjacency only against the still-unpopped remainder, so each
    // pair is seen once.
    rest = common;
    for (int w = 0; w < words; ++w) {
      while (rest[w]) {
        const int x = (w << 6) + std::countr_zero(rest[w]);
        rest[w] &= rest[w] - 1;
        const std::uint64_t* rx = g.row(x);
        for (int w2 = w; w2 < words; ++w2)
          k4_flags += std::popcount(rx[w2] & rest[w2]);
      }
    }
  }

  const std::int64_t triangles = tri3 / 3;

  std::int64_t cherries = 0;    // paths of length 2, sum C(d, 2)
  std::int64_t stars_ni = 0;    // non-induced claws, sum C(d, 3)
  std::int64_t sq_deg_sum = 0;  // sum d^2
  std::int64_t paw_ni = 0;      // non-induced paws
  for (int v = 0; v < n; ++v) {
    const std::int64_t d = deg[v];
    cherries += d * (d - 1) / 2;
    stars_ni += binom(d, 3);
    sq_deg_sum += d * d;
    paw_ni += (tri_at[v] / 2) * (d - 2);
  }

  // Closed 4-walks decompose into degenerate walks plus 8 per 4-cycle.
  // trace(A^4) = sum_i d_i^2 + sum_i d_i (d_i - 1) + 8 C4.
  std::int64_t closed4 = 0;
  {
    // (A^2)_{ij} summed as squared common-neighbor counts gives trace(A^4).
    // Equivalently closed4 = sum_{i,j} cn(i,j)^2 with cn(i,i) = d_i; use the
    // bitset rows directly.
    for (int i = 0; i < n; ++i) {
      const std::uint64_t* ri = g.row(i);
      for (int j = 0; j < n; ++j) {
        const std::uint64_t* rj = g.row(j);
        std::int64_t cn = 0;
        for (int w = 0; w < words; ++w) cn += std::popcount(ri[w] & rj[w]);
        closed4 += cn * cn;
      }
    }
  }
  const std::int64_t c4_ni = (closed4 - 2 * sq_deg_sum + 2 * m) / 8;
  const std::int64_t p4_ni = p4_mid - 3 * triangles;

  // Induced counts by inclusion-exclusion over spanning-subgraph counts.
  const std::int64_t k4 = k4_flags / 6;
  const std::int64_t diamond = dia_pairs - 6 * k4;
  const std::int64_t cycle4 = c4_ni - diamond - 3 * k4;
  const std::int64_t paw = paw_ni - 4 * diamond - 12 * k4;
  const std::int64_t star4 = stars_ni - paw - 2 * diamond - 4 * k4;
  const std::int64_t path4 =
      p4_ni - 2 * paw - 4 * cycle4 - 6 * diamond - 12 * k4;

  MotifCounts out;
  out.n = n;
  out.counts[static_cast<int>(MotifId::kEdge)] = m;
  out.counts[static_cast<int>(MotifId::kPath3)] = cherries - 3 * triangles;
  out.counts[static_cast<int>(MotifId::kTriangle)] = triangles;
  out.counts[static_cast<int>(MotifId::kPath4)] = path4;
  out.counts[static_cast<int>(MotifId::kStar4)] = star4;
  out.counts[static_cast<int>(MotifId::kCycle4)] = cycle4;
  out.counts[static_cast<int>(MotifId::kPaw)] = paw;
  out.counts[static_cast<int>(MotifId::kDiamond)] = diamond;
  out.counts[static_cast<int>(MotifId::kK4)] = k4;
  return out;
}

DensityVector census_fast(const Graph& g) {
  return normalize_counts(census_counts_fast(g));
}

double subgraph_distance(const DensityVector& a, const DensityVector& b) {
  double sum = 0.0;
  for (int i = 0; i < kMotifCount; ++i) {
    const double d = a.rho[i] - b.rho[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace graphdm
