#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "graphdm/graph.hpp"

namespace graphdm {

/// One dataset entry: a graph plus the parameters and seed it was built with.
struct GraphRecord {
  std::string id;
  Graph graph;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  bool operator==(const GraphRecord&) const = default;
};

/// Reads a line-delimited JSON dataset (one GraphRecord per line):
///   {"id": str, "n": int, "edges": [[u,v],...], "params": {...}, "seed": int}
/// with 0 <= u < v < n. Rejects malformed lines, duplicate ids, and edge
/// endpoints out of range, reporting the offending line number. An empty
/// file is an empty dataset. Records are returned in file order.
std::vector<GraphRecord> read_dataset(const std::string& path);

/// Writes records in the same format, edges in lexicographic order, so a
/// write/read round trip is the identity and re-runs are byte-identical.
void write_dataset(const std::vector<GraphRecord>& records,
                   const std::string& path);

/// Sorts records by id (the canonical order used by every analysis stage,
/// so results do not depend on file order).
void sort_by_id(std::vector<GraphRecord>& records);

/// Throws DataError unless all records share one node count n >= min_n.
int common_node_count(const std::vector<GraphRecord>& records, int min_n = 1);

}  // namespace graphdm
