#include <doctest.h>

#include <cmath>
#include <numeric>

#include "graphdm/error.hpp"
#include "graphdm/generators.hpp"
#include "graphdm/graph.hpp"
#include "graphdm/rng.hpp"
#include "graphdm/spectral.hpp"
#include "support/oracles.hpp"

using namespace graphdm;

TEST_CASE("default lambda grid spans (0, 5/(n-1)]") {
  const LambdaGrid grid = default_lambda_grid(100);
  REQUIRE(grid.size() == 100);
  CHECK(grid.lambdas.front() > 0.0);
  CHECK(grid.lambdas.back() == doctest::Approx(5.0 / 99.0).epsilon(1e-15));
  validate_grid(grid);

  LambdaGrid bad{{0.1, 0.1}};
  CHECK_THROWS_AS(validate_grid(bad), ParameterError);
  CHECK_THROWS_AS(validate_grid(LambdaGrid{{}}), ParameterError);
}

TEST_CASE("empty graph: zero spectrum, S(lambda) = 1/n everywhere") {
  const SpectralCoarse c = spectral_coarse(Graph(8));
  CHECK(c.d.cwiseAbs().maxCoeff() == 0.0);
  for (double lambda : {0.0, 0.5, 3.0, 100.0})
    CHECK(s_value(c, lambda) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("complete graph closed form S(lambda) = exp(lambda (n-1)) / n") {
  for (int n : {2, 10, 100}) {
    const SpectralCoarse c = spectral_coarse(complete_graph(n));
    const LambdaGrid grid = default_lambda_grid(n);
    for (double lambda : grid.lambdas) {
      const double expected = std::exp(lambda * (n - 1)) / n;
      CHECK(s_value(c, lambda) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
  // K2 at lambda = 1: e/2
  const SpectralCoarse k2 = spectral_coarse(complete_graph(2));
  CHECK(s_value(k2, 1.0) ==
        doctest::Approx(std::exp(1.0) / 2.0).epsilon(1e-12));
  // K100 at lambda = 0.01: e^0.99 / 100
  const SpectralCoarse k100 = spectral_coarse(complete_graph(100));
  CHECK(s_value(k100, 0.01) ==
        doctest::Approx(std::exp(0.99) / 100.0).epsilon(1e-12));
  CHECK(s_value(k100, 0.01) == doctest::Approx(0.026912).epsilon(1e-4));
}

TEST_CASE("spectral coarse invariants on random graphs") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 5 + static_cast<int>(rng.uniform_below(20));
    const Graph g = generate_er(n, 0.1 + 0.8 * rng.uniform01(), 40 + trial);
    const SpectralCoarse c = spectral_coarse(g);

    // l == r bit for bit with uniform weights
    REQUIRE(c.l.size() == n);
    for (int i = 0; i < n; ++i) CHECK(c.l[i] == c.r[i]);

    // descending eigenvalues, traceless
    for (int i = 1; i < n; ++i) CHECK(c.d[i - 1] >= c.d[i]);
    CHECK(std::abs(c.d.sum()) <= 1e-9 * n);

    // S(0) = q^T p = 1/n
    CHECK(s_value(c, 0.0) == doctest::Approx(1.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("s_value agrees with the truncated power-series oracle") {
  Rng rng(6);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 5 + static_cast<int>(rng.uniform_below(16));  // 5..20
    const Graph g = generate_er(n, 0.2 + 0.6 * rng.uniform01(), 90 + trial);
    const SpectralCoarse c = spectral_coarse(g);
    const LambdaGrid grid = default_lambda_grid(n, 7);
    for (double lambda : grid.lambdas) {
      const double oracle = oracles::s_value_series(g, lambda);
      CHECK(s_value(c, lambda) == doctest::Approx(oracle).epsilon(1e-8));
    }
  }
}

TEST_CASE("spectral distance is permutation invariant") {
  Rng rng(8);
  const Graph g = generate_er(30, 0.35, 17);
  const LambdaGrid grid = default_lambda_grid(30);
  const SpectralCoarse orig = spectral_coarse(g);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> perm(30);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 29; i > 0; --i)
      std::swap(perm[i], perm[rng.uniform_below(i + 1)]);
    const SpectralCoarse relabeled = spectral_coarse(permute_nodes(g, perm));
    CHECK(spectral_distance(orig, relabeled, grid) <= 1e-10);
  }
  CHECK(spectral_distance(orig, orig, grid) == 0.0);
}

TEST_CASE("spectral distance symmetry and staged-row equivalence") {
  const Graph a = generate_er(12, 0.4, 3);
  const Graph b = generate_er(12, 0.7, 4);
  const LambdaGrid grid = default_lambda_grid(12);
  const SpectralCoarse ca = spectral_coarse(a), cb = spectral_coarse(b);
  const double d1 = spectral_distance(ca, cb, grid);
  CHECK(d1 == spectral_distance(cb, ca, grid));
  CHECK(s_row_distance(s_values(ca, grid), s_values(cb, grid)) ==
        doctest::Approx(d1).epsilon(1e-12));
}

TEST_CASE("custom weighting vectors") {
  const Graph g = generate_er(10, 0.5, 21);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(10);
  q[0] = 1.0;  // score only node 0
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(10, 0.1);
  const SpectralCoarse c = spectral_coarse(g, q, p);
  CHECK(c.l != c.r);
  // S(0) = q^T p regardless of the graph
  CHECK(s_value(c, 0.0) == doctest::Approx(q.dot(p)).epsilon(1e-12));
  CHECK_THROWS_AS(spectral_coarse(g, Eigen::VectorXd::Zero(9), p),
                  ParameterError);
}

TEST_CASE("overflow guard names the offending lambda") {
  const SpectralCoarse c = spectral_coarse(complete_graph(100));
  CHECK_THROWS_WITH_AS(s_value(c, 8.0), doctest::Contains("spectral radius"),
                       NumericError);
  // 700/99 is just above the guard threshold for K100
  CHECK_NOTHROW(s_value(c, 7.0));
}
