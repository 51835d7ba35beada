#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "graphdm/dataset.hpp"
#include "graphdm/error.hpp"
#include "graphdm/evolve.hpp"
#include "graphdm/generators.hpp"
#include "graphdm/graph.hpp"
#include "graphdm/rng.hpp"

using namespace graphdm;

TEST_CASE("rng streams are deterministic and derivation is order-sensitive") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(Rng::derive(1, {2, 3}) != Rng::derive(1, {3, 2}));
  CHECK(Rng::derive(1, {2}) != Rng::derive(2, {2}));

  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  // uniform_below stays in range and hits every residue eventually
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) seen.insert(c.uniform_below(7));
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(c.uniform_below(0), ParameterError);
}

TEST_CASE("graph edges are symmetric, self-loops rejected") {
  Graph g(5);
  CHECK(g.add_edge(1, 3));
  CHECK(g.has_edge(3, 1));
  CHECK_FALSE(g.add_edge(3, 1));
  CHECK(g.edge_count() == 1);
  CHECK(g.remove_edge(1, 3));
  CHECK_FALSE(g.remove_edge(1, 3));
  CHECK(g.edge_count() == 0);
  CHECK_THROWS_AS(g.add_edge(2, 2), ParameterError);
  CHECK_THROWS_AS(g.add_edge(0, 5), ParameterError);
  CHECK_THROWS_AS(Graph(0), ParameterError);
}

TEST_CASE("degree histogram examples") {
  SUBCASE("empty graph on 4 nodes") {
    const auto h = degree_histogram(Graph(4));
    CHECK(h.counts == std::vector<std::int64_t>{4, 0, 0, 0});
  }
  SUBCASE("complete graph on 4 nodes") {
    const auto h = degree_histogram(complete_graph(4));
    CHECK(h.counts == std::vector<std::int64_t>{0, 0, 0, 4});
  }
  SUBCASE("4-path") {
    Graph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    const auto h = degree_histogram(g);
    CHECK(h.counts == std::vector<std::int64_t>{0, 2, 2, 0});
  }
}

TEST_CASE("generate_er endpoints and purity") {
  CHECK(generate_er(5, 0.0, 1).edge_count() == 0);
  CHECK(generate_er(5, 1.0, 1).edge_count() == 10);
  CHECK(generate_er(20, 0.3, 99) == generate_er(20, 0.3, 99));
  CHECK(generate_er(20, 0.3, 99) != generate_er(20, 0.3, 100));
  CHECK_THROWS_AS(generate_er(5, -0.1, 1), ParameterError);
  CHECK_THROWS_AS(generate_er(5, 1.1, 1), ParameterError);
}

TEST_CASE("generate_er matches the binomial edge-count oracle") {
  // C(100,2) = 4950 Bernoulli(0.5) trials per graph: mean 2475,
  // single-sample sd sqrt(4950 * 0.25).
  const int trials = 10000;
  double total = 0.0;
  for (int s = 0; s < trials; ++s)
    total += generate_er(100, 0.5, 1000 + s).edge_count();
  const double mean = total / trials;
  const double sd_single = std::sqrt(4950.0 * 0.25);
  CHECK(std::abs(mean - 2475.0) <= 3.0 * sd_single);
  // and the far tighter band on the mean of 10^4 samples (4 sigma)
  CHECK(std::abs(mean - 2475.0) <= 4.0 * sd_single / std::sqrt(trials));
}

TEST_CASE("generate_chung_lu complete at p=1, r=0") {
  const Graph g = generate_chung_lu(100, 1.0, 0.0, 5);
  CHECK(g.edge_count() == 100 * 99 / 2);
}

TEST_CASE("generate_chung_lu with r=0 behaves like G(n, min(p,1))") {
  // All Q_ij collapse to p, so edge counts are Binomial(C(n,2), p).
  const int trials = 2000;
  const double p = 0.3;
  double total = 0.0;
  for (int s = 0; s < trials; ++s)
    total += generate_chung_lu(50, p, 0.0, 7000 + s).edge_count();
  const double pairs = 50.0 * 49.0 / 2.0;
  const double mean = total / trials;
  const double sd_mean = std::sqrt(pairs * p * (1 - p) / trials);
  CHECK(std::abs(mean - pairs * p) <= 4.0 * sd_mean);
}

TEST_CASE("generate_chung_lu edge frequencies match the weight formula") {
  // n=4, p=0.5, r=1: w = (0.5, 1.0, 1.5, 2.0), sum 5, Q_ij = w_i w_j / 5.
  const double w[4] = {0.5, 1.0, 1.5, 2.0};
  double q[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) q[i][j] = w[i] * w[j] / 5.0;
  CHECK(q[0][1] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(q[2][3] == doctest::Approx(0.6).epsilon(1e-15));

  const int trials = 100000;
  int hits[4][4] = {};
  for (int s = 0; s < trials; ++s) {
    const Graph g = generate_chung_lu(4, 0.5, 1.0, 30000 + s);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (g.has_edge(i, j)) ++hits[i][j];
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double freq = static_cast<double>(hits[i][j]) / trials;
      const double sigma = std::sqrt(q[i][j] * (1 - q[i][j]) / trials);
      CHECK(std::abs(freq - q[i][j]) <= 3.0 * sigma);
    }
  }
  CHECK_THROWS_AS(generate_chung_lu(4, 0.0, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(generate_chung_lu(4, 0.5, -1.0, 1), ParameterError);
}

TEST_CASE("evolve_step rule endpoints") {
  Rng rng(11);
  SUBCASE("empty graph with r=0 gains exactly one edge") {
    for (int i = 0; i < 20; ++i) {
      const Graph g = evolve_step(Graph(10), 0.0, rng);
      CHECK(g.edge_count() == 1);
    }
  }
  SUBCASE("complete graph with r=0 never changes") {
    const Graph full = complete_graph(20);
    Graph g = full;
    for (int i = 0; i < 50; ++i) g = evolve_step(g, 0.0, rng);
    CHECK(g == full);
  }
  SUBCASE("edge count moves by -1, 0 or +1") {
    Graph g = generate_er(15, 0.4, 3);
    for (int i = 0; i < 300; ++i) {
      const int before = g.edge_count();
      g = evolve_step(g, 0.5, rng);
      const int delta = g.edge_count() - before;
      CHECK(delta >= -1);
      CHECK(delta <= 1);
    }
  }
  CHECK_THROWS_AS(evolve_step(Graph(4), 1.5, rng), ParameterError);
}

TEST_CASE("evolve_many matches repeated evolve_step") {
  Rng a(123), b(123);
  Graph stepped = generate_er(12, 0.3, 9);
  Graph batched = stepped;
  for (int i = 0; i < 200; ++i) stepped = evolve_step(stepped, 0.2, a);
  batched = evolve_many(batched, 200, 0.2, b);
  CHECK(stepped == batched);
}

TEST_CASE("dynamic model settles at the drift-balance edge count") {
  // E[dm] = (1 - m / C(n,2)) - r = 0  =>  m* = C(n,2) (1 - r).
  const int n = 30;
  const double r = 0.1;
  const double pairs = n * (n - 1) / 2.0;
  const double target = pairs * (1.0 - r);

  Rng rng(77);
  Graph g = evolve_many(Graph(n), 20000, r, rng);  // burn-in
  double sum = 0.0;
  const int samples = 400;
  for (int s = 0; s < samples; ++s) {
    g = evolve_many(g, 200, r, rng);
    sum += g.edge_count();
  }
  const double mean = sum / samples;
  CHECK(std::abs(mean - target) / target < 0.02);
}

TEST_CASE("evolve_trajectory snapshot bookkeeping") {
  const Graph g0 = generate_er(8, 0.2, 4);
  SUBCASE("steps=0 returns only the initial graph") {
    const auto recs = evolve_trajectory(g0, 0, 10, 0.1, 5);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].graph == g0);
    CHECK(recs[0].params.at("step") == 0.0);
  }
  SUBCASE("100 steps, every 10 -> 11 records") {
    const auto recs = evolve_trajectory(g0, 100, 10, 0.1, 5);
    CHECK(recs.size() == 11);
    CHECK(recs.back().params.at("step") == 100.0);
  }
  SUBCASE("same seed, same trajectory") {
    CHECK(evolve_trajectory(g0, 50, 5, 0.1, 6) ==
          evolve_trajectory(g0, 50, 5, 0.1, 6));
  }
  CHECK_THROWS_AS(evolve_trajectory(g0, -1, 1, 0.1, 5), ParameterError);
  CHECK_THROWS_AS(evolve_trajectory(g0, 1, 0, 0.1, 5), ParameterError);
}

namespace {

std::filesystem::path temp_file(const char* name) {
  const auto dir =
      std::filesystem::temp_directory_path() / "graphdm_test_dataset";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("dataset write/read round trip") {
  std::vector<GraphRecord> recs;
  for (int i = 0; i < 5; ++i) {
    GraphRecord rec;
    rec.id = "g" + std::to_string(i);
    rec.graph = generate_er(10, 0.1 * (i + 1), 100 + i);
    rec.params["p"] = 0.1 * (i + 1);
    rec.seed = 100 + i;
    recs.push_back(rec);
  }
  const auto path = temp_file("roundtrip.jsonl");
  write_dataset(recs, path.string());
  CHECK(read_dataset(path.string()) == recs);

  // byte-identical on re-write
  const auto path2 = temp_file("roundtrip2.jsonl");
  write_dataset(recs, path2.string());
  std::ifstream f1(path), f2(path2);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
}

TEST_CASE("dataset rejects bad records with a line position") {
  const auto path = temp_file("bad.jsonl");
  SUBCASE("edge endpoint out of range") {
    std::ofstream(path) << R"({"id":"a","n":4,"edges":[[0,4]],"params":{},"seed":0})"
                        << '\n';
    CHECK_THROWS_WITH_AS(read_dataset(path.string()),
                         doctest::Contains(":1:"), DataError);
  }
  SUBCASE("duplicate id on line 2") {
    std::ofstream(path) << R"({"id":"a","n":4,"edges":[],"params":{},"seed":0})"
                        << '\n'
                        << R"({"id":"a","n":4,"edges":[],"params":{},"seed":0})"
                        << '\n';
    CHECK_THROWS_WITH_AS(read_dataset(path.string()),
                         doctest::Contains(":2:"), DataError);
  }
  SUBCASE("malformed json") {
    std::ofstream(path) << "{not json\n";
    CHECK_THROWS_AS(read_dataset(path.string()), DataError);
  }
  SUBCASE("missing field") {
    std::ofstream(path) << R"({"id":"a","n":4})" << '\n';
    CHECK_THROWS_AS(read_dataset(path.string()), DataError);
  }
  SUBCASE("empty file is an empty dataset") {
    std::ofstream(path) << "";
    CHECK(read_dataset(path.string()).empty());
  }
}

TEST_CASE("common_node_count flags mixed sizes") {
  std::vector<GraphRecord> recs(2);
  recs[0].id = "a";
  recs[0].graph = Graph(5);
  recs[1].id = "b";
  recs[1].graph = Graph(6);
  CHECK_THROWS_AS(common_node_count(recs), DataError);
  recs[1].graph = Graph(5);
  CHECK(common_node_count(recs) == 5);
  CHECK_THROWS_AS(common_node_count(recs, 6), DataError);
}
