// End-to-end tests of the command-line pipeline: stage composition,
// manifests, content-address refusals, and reproducibility. Each test shells
// out to the real binary (GRAPHDM_CLI_PATH, injected by CMake).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "graphdm/csv.hpp"
#include "graphdm/dataset.hpp"
#include "graphdm/generators.hpp"
#include "graphdm/model_io.hpp"

using namespace graphdm;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "graphdm_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(GRAPHDM_CLI_PATH) + " " + args +
                          " >> " + (kWork / "cli.log").string() + " 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Workspace {
  Workspace() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
  fs::path dir(const char* name) const { return kWork / name; }
  std::string arg(const char* name) const { return (kWork / name).string(); }
};

}  // namespace

TEST_CASE("generate is reproducible byte for byte and honors --force") {
  Workspace ws;
  REQUIRE(run("generate --kind er --count 10 --nodes 12 --seed 5 --out " +
              ws.arg("a")) == 0);
  REQUIRE(run("generate --kind er --count 10 --nodes 12 --seed 5 --out " +
              ws.arg("b")) == 0);
  CHECK(slurp(ws.dir("a") / "dataset.jsonl") ==
        slurp(ws.dir("b") / "dataset.jsonl"));

  // same dir again: refused without --force, accepted with it
  CHECK(run("generate --kind er --count 10 --nodes 12 --seed 5 --out " +
            ws.arg("a")) != 0);
  CHECK(run("generate --kind er --count 10 --nodes 12 --seed 5 --force --out " +
            ws.arg("a")) == 0);
}

namespace {

// plain rank correlation, enough for a monotonicity check
double rank_corr(std::vector<double> x, std::vector<double> y) {
  auto to_ranks = [](std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[order[i]] = double(i);
    v = r;
  };
  to_ranks(x);
  to_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("pipeline composes and nystrom reproduces the reference coords") {
  Workspace ws;
  REQUIRE(run("generate --kind er --count 25 --nodes 16 --seed 11 --out " +
              ws.arg("data")) == 0);
  REQUIRE(run("census --in " + ws.arg("data") + " --out " + ws.arg("cen")) ==
          0);
  REQUIRE(run("kernel --metric subgraph --in " + ws.arg("cen") + " --out " +
              ws.arg("kern")) == 0);
  REQUIRE(run("dmap --in " + ws.arg("kern") + " --out " + ws.arg("dmap")) ==
          0);
  REQUIRE(run("nystrom --model " + ws.arg("dmap") + " --in " + ws.arg("data") +
              " --out " + ws.arg("nys")) == 0);

  const CsvTable coords = read_csv((ws.dir("dmap") / "coords.csv").string());
  const CsvTable nys = read_csv((ws.dir("nys") / "nystrom.csv").string());
  REQUIRE(coords.ids == nys.ids);
  REQUIRE(coords.values.cols() == nys.values.cols());
  CHECK((coords.values - nys.values).cwiseAbs().maxCoeff() <= 1e-8);

  // default eigenpair count is 10
  const CsvTable eigs =
      read_csv((ws.dir("dmap") / "eigenvalues.csv").string());
  CHECK(eigs.ids.size() == 10);

  // model file round trip preserves the eigen data
  const ModelFile mf = read_model((ws.dir("dmap") / "model.json").string());
  CHECK(mf.model.eig_count() == 10);
  CHECK(mf.ids.size() == 25);
  CHECK(std::abs(mf.model.eigenvalues[0] - 1.0) <= 1e-10);

  // phi2 read back through the staged files tracks the construction
  // parameter p
  auto records = read_dataset((ws.dir("data") / "dataset.jsonl").string());
  sort_by_id(records);
  std::vector<double> p, phi2;
  for (std::size_t i = 0; i < records.size(); ++i) {
    REQUIRE(records[i].id == coords.ids[i]);
    p.push_back(records[i].params.at("p"));
    phi2.push_back(coords.values(static_cast<Eigen::Index>(i), 0));
  }
  CHECK(std::abs(rank_corr(p, phi2)) >= 0.9);
}

namespace {
std::vector<GraphRecord> tiny_records() {
  std::vector<GraphRecord> recs;
  for (int i = 0; i < 12; ++i) {
    GraphRecord rec;
    rec.id = "g" + std::to_string(i);
    rec.seed = 40 + i;
    rec.graph = generate_er(10, 0.1 + 0.07 * i, rec.seed);
    rec.params["p"] = 0.1 + 0.07 * i;
    recs.push_back(rec);
  }
  return recs;
}
}  // namespace

TEST_CASE("analysis stages canonicalize record order by id") {
  Workspace ws;
  auto records = tiny_records();
  fs::create_directories(ws.dir("fwd"));
  fs::create_directories(ws.dir("rev"));
  write_dataset(records, (ws.dir("fwd") / "dataset.jsonl").string());
  std::reverse(records.begin(), records.end());
  write_dataset(records, (ws.dir("rev") / "dataset.jsonl").string());

  for (const char* d : {"fwd", "rev"}) {
    const std::string base = ws.arg(d);
    REQUIRE(run("census --in " + base + " --out " + base + "-cen") == 0);
    REQUIRE(run("kernel --metric subgraph --in " + base + "-cen --out " +
                base + "-kern") == 0);
    REQUIRE(run("dmap --in " + base + "-kern --out " + base +
                "-dmap --k-eigs 4") == 0);
  }
  CHECK(slurp(kWork / "fwd-dmap" / "coords.csv") ==
        slurp(kWork / "rev-dmap" / "coords.csv"));
  CHECK(slurp(kWork / "fwd-dmap" / "eigenvalues.csv") ==
        slurp(kWork / "rev-dmap" / "eigenvalues.csv"));
}

TEST_CASE("metric mismatches between stages are refused") {
  Workspace ws;
  REQUIRE(run("generate --kind er --count 12 --nodes 14 --seed 2 --out " +
              ws.arg("data")) == 0);
  REQUIRE(run("census --in " + ws.arg("data") + " --out " + ws.arg("cen")) ==
          0);
  REQUIRE(run("spectral --in " + ws.arg("data") + " --out " + ws.arg("spec") +
              " --lambda-count 20") == 0);

  // kernel pointed at the wrong upstream stage
  CHECK(run("kernel --metric spectral --in " + ws.arg("cen") + " --out " +
            ws.arg("bad1")) != 0);
  CHECK(run("kernel --metric subgraph --in " + ws.arg("spec") + " --out " +
            ws.arg("bad2")) != 0);

  // nystrom against a model of the other metric
  REQUIRE(run("kernel --metric subgraph --in " + ws.arg("cen") + " --out " +
              ws.arg("kern")) == 0);
  REQUIRE(run("dmap --in " + ws.arg("kern") + " --out " + ws.arg("dmap") +
              " --k-eigs 5") == 0);
  CHECK(run("nystrom --model " + ws.arg("dmap") + " --in " + ws.arg("data") +
            " --out " + ws.arg("bad3") + " --metric spectral") != 0);
  CHECK(run("nystrom --model " + ws.arg("dmap") + " --in " + ws.arg("data") +
            " --out " + ws.arg("ok") + " --metric subgraph") == 0);
}

TEST_CASE("stages refuse inputs whose content no longer matches the manifest") {
  Workspace ws;
  REQUIRE(run("generate --kind er --count 10 --nodes 14 --seed 3 --out " +
              ws.arg("data")) == 0);
  REQUIRE(run("census --in " + ws.arg("data") + " --out " + ws.arg("cen")) ==
          0);

  // tamper with the census output after its manifest was written
  std::ofstream(ws.dir("cen") / "census.csv", std::ios::app) << "tampered\n";
  CHECK(run("kernel --metric subgraph --in " + ws.arg("cen") + " --out " +
            ws.arg("kern")) != 0);
}

TEST_CASE("pca and jacobian stages run against generation parameters") {
  Workspace ws;
  REQUIRE(run("generate --kind chung-lu --count 60 --nodes 24 --seed 21 "
              "--out " +
              ws.arg("data")) == 0);
  REQUIRE(run("census --in " + ws.arg("data") + " --out " + ws.arg("cen")) ==
          0);
  REQUIRE(run("kernel --metric subgraph --in " + ws.arg("cen") + " --out " +
              ws.arg("kern")) == 0);
  REQUIRE(run("dmap --in " + ws.arg("kern") + " --out " + ws.arg("dmap") +
              " --k-eigs 6") == 0);
  REQUIRE(run("pca --in " + ws.arg("data") + " --out " + ws.arg("pca") +
              " --components 2") == 0);
  REQUIRE(run("jacobian --coords " + ws.arg("dmap") + " --params p,r "
              "--dataset " +
              ws.arg("data") + " --k-nn 8 --out " + ws.arg("jac")) == 0);

  const CsvTable jac = read_csv((ws.dir("jac") / "jacobian.csv").string());
  CHECK(jac.ids.size() == 60);
  CHECK(jac.header.back() == "neighborhood");

  const CsvTable proj =
      read_csv((ws.dir("pca") / "projections.csv").string());
  CHECK(proj.ids.size() == 60);
  CHECK(proj.values.cols() == 2);

  // jacobian against the pca projections as targets
  REQUIRE(run("jacobian --coords " + ws.arg("dmap") + " --projections " +
              ws.arg("pca") + " --k-nn 8 --out " + ws.arg("jac2")) == 0);
}

TEST_CASE("cpi command writes a trajectory with matched manifests") {
  Workspace ws;
  REQUIRE(run("generate --kind evolve --count 5 --nodes 14 --seed 8 "
              "--steps 400 --snapshot-every 40 --out " +
              ws.arg("ref")) == 0);
  REQUIRE(run("census --in " + ws.arg("ref") + " --out " + ws.arg("cen")) ==
          0);
  REQUIRE(run("kernel --metric subgraph --in " + ws.arg("cen") +
              " --out " + ws.arg("kern") + " --epsilon 10") == 0);
  REQUIRE(run("dmap --in " + ws.arg("kern") + " --out " + ws.arg("dmap") +
              " --k-eigs 5") == 0);
  REQUIRE(run("cpi --dataset " + ws.arg("ref") + " --model " + ws.arg("dmap") +
              " --t-burst 3 --t-project 3 --steps-per-timestep 5 --k-runs 2 "
              "--neighbors 6 --coarse-steps 4 --seed 17 --init-p 0.1 --out " +
              ws.arg("cpi")) == 0);

  std::ifstream traj(ws.dir("cpi") / "trajectory.csv");
  std::string header;
  std::getline(traj, header);
  CHECK(header == "step,fine_steps_used,phi2,phi3,mean_edges,hist_file");
  int lines = 0;
  for (std::string line; std::getline(traj, line);) ++lines;
  CHECK(lines == 5);  // steps 0..4
  CHECK(fs::exists(ws.dir("cpi") / "hists" / "step_0004.csv"));
  CHECK(fs::exists(ws.dir("cpi") / "lift_diagnostics.csv"));
  CHECK(fs::exists(ws.dir("cpi") / "manifest.json"));

  // a model over a different reference dataset is refused
  REQUIRE(run("generate --kind er --count 11 --nodes 14 --seed 9 --out " +
              ws.arg("other")) == 0);
  CHECK(run("cpi --dataset " + ws.arg("other") + " --model " + ws.arg("dmap") +
            " --coarse-steps 1 --out " + ws.arg("cpi2")) != 0);
}
