#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "graphdm/graph.hpp"

namespace graphdm {

/// The nine connected graphs on at most four nodes, the motif set used for
/// the subgraph-density embedding. Order is fixed; it is the column order of
/// every density vector and CSV this library emits.
enum class MotifId : int {
  kEdge = 0,      // k=2
  kPath3 = 1,     // k=3, degrees 1,1,2
  kTriangle = 2,  // k=3, degrees 2,2,2
  kPath4 = 3,     // k=4, degrees 1,1,2,2
  kStar4 = 4,     // k=4, degrees 1,1,1,3
  kCycle4 = 5,    // k=4, degrees 2,2,2,2
  kPaw = 6,       // k=4, degrees 1,2,2,3 (triangle + pendant)
  kDiamond = 7,   // k=4, degrees 2,2,3,3 (K4 minus an edge)
  kK4 = 8,        // k=4, degrees 3,3,3,3
};

inline constexpr int kMotifCount = 9;

/// Node count of the motif (2, 3 or 4).
int motif_size(MotifId id);

/// Fixed lower-case name, used as CSV column header.
std::string_view motif_name(MotifId id);

/// A canonical instance of the motif (nodes 0..k-1).
Graph motif_instance(MotifId id);

/// Raw counts: number of k-node vertex subsets whose induced subgraph is the
/// motif (one count per subset, not per embedding). Exposed so alternative
/// normalizations can be recovered from the integers.
struct MotifCounts {
  std::array<std::int64_t, kMotifCount> counts{};
  int n = 0;

  std::int64_t operator[](MotifId id) const {
    return counts[static_cast<int>(id)];
  }
};

/// Subgraph densities: each count divided by C(n, k) for the motif's k.
struct DensityVector {
  std::array<double, kMotifCount> rho{};

  double operator[](MotifId id) const { return rho[static_cast<int>(id)]; }
  bool operator==(const DensityVector&) const = default;
};

DensityVector normalize_counts(const MotifCounts& counts);

/// Exact census by ESU enumeration: every connected vertex subset of size
/// 2..4 is visited exactly once and classified by its induced degree
/// multiset (a complete isomorphism invariant for connected graphs on <= 4
/// nodes). Requires n >= 4.
MotifCounts census_counts(const Graph& g);
DensityVector census(const Graph& g);

/// Same result from closed-form identities: edge count, triangle count via
/// trace(A^3), star/path/cycle counts from degree sums and common-neighbor
/// counts, and induced counts by inclusion-exclusion over non-induced
/// counts. All integer arithmetic; agrees with census_counts exactly.
MotifCounts census_counts_fast(const Graph& g);
DensityVector census_fast(const Graph& g);

/// Unweighted L2 distance between two density vectors.
double subgraph_distance(const DensityVector& a, const DensityVector& b);

}  // namespace graphdm
