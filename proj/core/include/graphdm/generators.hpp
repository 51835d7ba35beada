#pragma once

#include <cstdint>

#include "graphdm/graph.hpp"

namespace graphdm {

/// Erdos-Renyi G(n, p): each unordered pair is an edge independently with
/// probability p. Deterministic given the seed: pairs are visited in
/// lexicographic order, one uniform draw per pair, from the stream
/// Rng(Rng::derive(seed, {})).
Graph generate_er(int n, double p, std::uint64_t seed);

/// Two-parameter Chung-Lu family. Node i (1-based in the weight formula,
/// 0-based node ids internally, so node id v carries weight w_{v+1}) gets
/// weight w_i = n * p * (i/n)^r; the pair (i, j) is an edge independently
/// with probability min(w_i * w_j / sum_k w_k, 1). Same pair order and
/// stream discipline as generate_er.
///
/// p = 1, r = 0 gives the complete graph; r = 0 reduces to G(n, min(p, 1)).
Graph generate_chung_lu(int n, double p, double r, std::uint64_t seed);

}  // namespace graphdm
