#pragma once

#include <cstdint>
#include <vector>

#include "graphdm/dataset.hpp"
#include "graphdm/graph.hpp"
#include "graphdm/rng.hpp"

namespace graphdm {

/// One step of the stochastic edge add/remove dynamics, in order:
///   1. draw an unordered node pair uniformly from the C(n,2) distinct
///      pairs; connect it if not already connected;
///   2. draw u ~ U[0,1); if u < r_remove and the graph has edges, delete
///      one existing edge chosen uniformly.
/// Rule 2 may delete the edge rule 1 just added (it is uniform over all
/// current edges). On an empty graph rule 2 is a no-op; the bernoulli draw
/// for rule 2 is consumed either way, so stream use per step is fixed at
/// one pair draw, one uniform, and one edge draw when a removal fires.
///
/// Edge count changes by exactly one of {-1, 0, +1}.
Graph evolve_step(const Graph& g, double r_remove, Rng& rng);

/// Runs `steps` evolution steps. Equivalent to folding evolve_step but keeps
/// an indexed edge list so each step is O(1) instead of O(m).
Graph evolve_many(const Graph& g, std::int64_t steps, double r_remove,
                  Rng& rng);

/// Simulates `steps` steps from g0, snapshotting at every multiple of
/// snapshot_every (including step 0). Records are named "<prefix>-s<step>";
/// params carry the step index and r_remove; every record stores `seed`.
/// Deterministic: the whole trajectory consumes the single stream
/// Rng(Rng::derive(seed, {})).
std::vector<GraphRecord> evolve_trajectory(const Graph& g0, std::int64_t steps,
                                           std::int64_t snapshot_every,
                                           double r_remove, std::uint64_t seed,
                                           const std::string& id_prefix = "traj");

}  // namespace graphdm
