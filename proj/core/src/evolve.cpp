#include "graphdm/evolve.hpp"

#include <bit>
#include <string>
#include <utility>

#include "graphdm/error.hpp"

namespace graphdm {

namespace {

// Maps a linear index in [0, C(n,2)) to the unordered pair at that position
// in lexicographic order.
std::pair<int, int> pair_from_index(int n, std::uint64_t k) {
  int u = 0;
  std::uint64_t remaining = static_cast<std::uint64_t>(n - 1);
  while (k >= remaining) {
    k -= remaining;
    ++u;
    --remaining;
  }
  return {u, u + 1 + static_cast<int>(k)};
}

// The k-th edge (u, v), u < v, in lexicographic order, found by scanning the
// packed upper-triangle rows. O(n * words), cheap at this scale, and - being
// a pure function of the edge set - keeps single steps and batched runs on
// identical trajectories.
std::pair<int, int> kth_edge(const Graph& g, std::uint64_t k) {
  const int n = g.node_count();
  const int words = g.words();
  for (int u = 0; u < n; ++u) {
    const std::uint64_t* row = g.row(u);
    for (int w = (u + 1) >> 6; w < words; ++w) {
      std::uint64_t bits = row[w];
      if (w == ((u + 1) >> 6) && ((u + 1) & 63))
        bits &= ~0ULL << ((u + 1) & 63);  // keep v > u only
      const int cnt = std::popcount(bits);
      if (k >= static_cast<std::uint64_t>(cnt)) {
        k -= cnt;
        continue;
      }
      while (k--) bits &= bits - 1;
      return {u, (w << 6) + std::countr_zero(bits)};
    }
  }
  throw NumericError("kth_edge: index beyond edge count");
}

// One dynamics step: add a uniform missing-or-present pair, then maybe
// remove a uniform existing edge. Stream use is fixed: one pair draw, one
// uniform, one edge draw when a removal fires.
void step_in_place(Graph& g, double r_remove, Rng& rng) {
  const int n = g.node_count();
  const std::uint64_t pair_count = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const auto [u, v] = pair_from_index(n, rng.uniform_below(pair_count));
  g.add_edge(u, v);
  const bool remove = rng.uniform01() < r_remove;
  if (remove && g.edge_count() > 0) {
    const auto [x, y] =
        kth_edge(g, rng.uniform_below(static_cast<std::uint64_t>(g.edge_count())));
    g.remove_edge(x, y);
  }
}

void check_r(double r_remove, const char* who) {
  if (!(r_remove >= 0.0 && r_remove <= 1.0))
    throw ParameterError(std::string(who) + ": r_remove must lie in [0, 1]");
}

}  // namespace

Graph evolve_step(const Graph& g, double r_remove, Rng& rng) {
  check_r(r_remove, "evolve_step");
  Graph out = g;
  step_in_place(out, r_remove, rng);
  return out;
}

Graph evolve_many(const Graph& g, std::int64_t steps, double r_remove,
                  Rng& rng) {
  check_r(r_remove, "evolve_many");
  if (steps < 0) throw ParameterError("evolve_many: steps must be >= 0");
  Graph out = g;
  for (std::int64_t s = 0; s < steps; ++s) step_in_place(out, r_remove, rng);
  return out;
}

std::vector<GraphRecord> evolve_trajectory(const Graph& g0, std::int64_t steps,
                                           std::int64_t snapshot_every,
                                           double r_remove, std::uint64_t seed,
                                           const std::string& id_prefix) {
  if (steps < 0) throw ParameterError("evolve_trajectory: steps must be >= 0");
  if (snapshot_every < 1)
    throw ParameterError("evolve_trajectory: snapshot_every must be >= 1");
  check_r(r_remove, "evolve_trajectory");

  Rng rng(Rng::derive(seed, {}));
  Graph g = g0;
  std::vector<GraphRecord> out;

  auto snapshot = [&](std::int64_t step) {
    GraphRecord rec;
    rec.id = id_prefix + "-s" + std::to_string(step);
    rec.graph = g;
    rec.params["step"] = static_cast<double>(step);
    rec.params["r_remove"] = r_remove;
    rec.seed = seed;
    out.push_back(std::move(rec));
  };

  snapshot(0);
  for (std::int64_t s = 1; s <= steps; ++s) {
    step_in_place(g, r_remove, rng);
    if (s % snapshot_every == 0) snapshot(s);
  }
  return out;
}

}  // namespace graphdm
