#include "graphdm/generators.hpp"

#include <cmath>
#include <vector>

#include "graphdm/error.hpp"
#include "graphdm/rng.hpp"

namespace graphdm {

Graph generate_er(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ParameterError("generate_er: p must lie in [0, 1]");
  Graph g(n);
  Rng rng(Rng::derive(seed, {}));
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.uniform01() < p) g.add_edge(u, v);
    }
  }
  return g;
}

Graph generate_chung_lu(int n, double p, double r, std::uint64_t seed) {
  if (!(p > 0.0)) throw ParameterError("generate_chung_lu: p must be positive");
  if (!(r >= 0.0))
    throw ParameterError("generate_chung_lu: r must be nonnegative");
  Graph g(n);

  std::vector<double> w(static_cast<std::size_t>(n));
  double w_sum = 0.0;
  for (int v = 0; v < n; ++v) {
    // weight index runs 1..n so all weights are strictly positive
    w[v] = n * p * std::pow(static_cast<double>(v + 1) / n, r);
    w_sum += w[v];
  }

  Rng rng(Rng::derive(seed, {}));
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double q = w[u] * w[v] / w_sum;
      const double prob = q < 1.0 ? q : 1.0;
      if (rng.uniform01() < prob) g.add_edge(u, v);
    }
  }
  return g;
}

}  // namespace graphdm
