// graphdm: embed ensembles of graphs with diffusion maps over two graph
// metrics and run equation-free coarse projective integration on top.
//
// Pipeline stages (each writes CSV/JSON plus a manifest into --out):
//   generate -> census | spectral -> kernel -> dmap -> nystrom
//   generate -> pca
//   dmap + pca|params -> jacobian
//   generate + dmap -> cpi

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphdm/csv.hpp"
#include "graphdm/dataset.hpp"
#include "graphdm/dmap.hpp"
#include "graphdm/efcpi.hpp"
#include "graphdm/error.hpp"
#include "graphdm/evolve.hpp"
#include "graphdm/generators.hpp"
#include "graphdm/model_io.hpp"
#include "graphdm/pca.hpp"
#include "graphdm/rng.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace graphdm;
using cli::ManifestWriter;

namespace {

// ---------------------------------------------------------------- helpers

std::string pad_index(int i, int width = 6) {
  std::string s = std::to_string(i);
  return std::string(width > static_cast<int>(s.size())
                         ? width - static_cast<int>(s.size())
                         : 0,
                     '0') +
         s;
}

void prepare_out_dir(const fs::path& dir,
                     const std::vector<std::string>& files, bool force) {
  fs::create_directories(dir);
  for (const auto& name : files) {
    const fs::path p = dir / name;
    if (fs::exists(p)) {
      if (!force)
        throw DataError("output " + p.string() +
                        " exists; pass --force to overwrite");
      fs::remove(p);
    }
  }
}

// Verifies the input against its stage manifest when one exists (files that
// never came out of a stage pass through untouched).
std::optional<json> verify_stage_input(const fs::path& file) {
  if (!fs::exists(file))
    throw DataError("input file not found: " + file.string());
  if (!fs::exists(file.parent_path() / "manifest.json")) return std::nullopt;
  return cli::check_stage_file(file);
}

std::vector<GraphRecord> load_dataset_sorted(const fs::path& file) {
  verify_stage_input(file);
  auto records = read_dataset(file.string());
  sort_by_id(records);
  return records;
}

LambdaGrid grid_from_json(const json& lambdas) {
  LambdaGrid grid;
  grid.lambdas = lambdas.get<std::vector<double>>();
  validate_grid(grid);
  return grid;
}

std::pair<int, int> parse_pair(const std::string& text, int k_eigs) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw ParameterError("--pair expects two comma-separated eigenvector "
                         "numbers, e.g. 2,3");
  const int a = std::stoi(text.substr(0, comma));
  const int b = std::stoi(text.substr(comma + 1));
  if (a < 2 || b < 2 || a == b)
    throw ParameterError("--pair eigenvectors must be distinct and >= 2 "
                         "(eigenvector 1 is the trivial constant)");
  if (a > k_eigs || b > k_eigs)
    throw ParameterError("--pair eigenvector beyond the model's " +
                         std::to_string(k_eigs) + " eigenpairs");
  return {a - 1, b - 1};  // 0-based model columns
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string kind;
  int count = 100;
  int nodes = 100;
  std::uint64_t seed = 1;
  std::optional<double> p_min, p_max, r_min, r_max;
  std::int64_t steps = 2000;
  std::int64_t snapshot_every = 100;
  double r_remove = 0.1;
  std::string out;
  bool force = false;
};

void run_generate(const GenerateArgs& a) {
  const fs::path out_dir = a.out;
  prepare_out_dir(out_dir, {"dataset.jsonl"}, a.force);

  double p_lo = a.p_min.value_or(a.kind == "chung-lu" ? 0.5 : 0.0);
  double p_hi = a.p_max.value_or(1.0);
  double r_lo = a.r_min.value_or(0.0);
  double r_hi = a.r_max.value_or(0.5);
  if (!(p_lo <= p_hi) || !(r_lo <= r_hi))
    throw ParameterError("generate: empty sampling interval");

  Rng param_stream(Rng::derive(a.seed, {1}));
  std::vector<GraphRecord> records;

  if (a.kind == "er") {
    for (int i = 0; i < a.count; ++i) {
      GraphRecord rec;
      rec.id = "er-" + pad_index(i);
      const double p = p_lo + (p_hi - p_lo) * param_stream.uniform01();
      rec.seed = Rng::derive(a.seed, {2, static_cast<std::uint64_t>(i)});
      rec.graph = generate_er(a.nodes, p, rec.seed);
      rec.params["p"] = p;
      records.push_back(std::move(rec));
    }
  } else if (a.kind == "chung-lu") {
    for (int i = 0; i < a.count; ++i) {
      GraphRecord rec;
      rec.id = "cl-" + pad_index(i);
      const double p = p_lo + (p_hi - p_lo) * param_stream.uniform01();
      const double r = r_lo + (r_hi - r_lo) * param_stream.uniform01();
      rec.seed = Rng::derive(a.seed, {2, static_cast<std::uint64_t>(i)});
      rec.graph = generate_chung_lu(a.nodes, p, r, rec.seed);
      rec.params["p"] = p;
      rec.params["r"] = r;
      records.push_back(std::move(rec));
    }
  } else {  // evolve: count trajectories from ER starts
    for (int t = 0; t < a.count; ++t) {
      const double p0 = p_lo + (p_hi - p_lo) * param_stream.uniform01();
      const std::uint64_t init_seed =
          Rng::derive(a.seed, {2, static_cast<std::uint64_t>(t)});
      const std::uint64_t traj_seed =
          Rng::derive(a.seed, {3, static_cast<std::uint64_t>(t)});
      const Graph g0 = generate_er(a.nodes, p0, init_seed);
      auto traj = evolve_trajectory(g0, a.steps, a.snapshot_every, a.r_remove,
                                    traj_seed, "ev-t" + pad_index(t, 4));
      for (auto& rec : traj) {
        rec.params["p0"] = p0;
        records.push_back(std::move(rec));
      }
    }
  }

  const fs::path dataset = out_dir / "dataset.jsonl";
  write_dataset(records, dataset.string());

  ManifestWriter manifest("generate", out_dir);
  ordered_json cfg;
  cfg["kind"] = a.kind;
  cfg["count"] = a.count;
  cfg["nodes"] = a.nodes;
  cfg["seed"] = a.seed;
  cfg["p_min"] = p_lo;
  cfg["p_max"] = p_hi;
  if (a.kind == "chung-lu") {
    cfg["r_min"] = r_lo;
    cfg["r_max"] = r_hi;
  }
  if (a.kind == "evolve") {
    cfg["steps"] = a.steps;
    cfg["snapshot_every"] = a.snapshot_every;
    cfg["r_remove"] = a.r_remove;
  }
  manifest.set_config(cfg);
  manifest.add_output(dataset);
  manifest.write();
  std::cout << "wrote " << records.size() << " records to " << dataset.string()
            << "\n";
}

// ------------------------------------------------------------------ census

void run_census(const std::string& in, const std::string& out, bool exact,
                bool force) {
  const fs::path out_dir = out;
  prepare_out_dir(out_dir, {"census.csv"}, force);
  const fs::path dataset = fs::path(in) / "dataset.jsonl";
  const auto records = load_dataset_sorted(dataset);
  common_node_count(records, 4);

  CsvTable table;
  table.header = {"id"};
  for (int i = 0; i < kMotifCount; ++i)
    table.header.emplace_back(motif_name(static_cast<MotifId>(i)));
  table.values.resize(static_cast<Eigen::Index>(records.size()), kMotifCount);
  for (std::size_t r = 0; r < records.size(); ++r) {
    table.ids.push_back(records[r].id);
    const DensityVector rho =
        exact ? census(records[r].graph) : census_fast(records[r].graph);
    for (int c = 0; c < kMotifCount; ++c) table.values(r, c) = rho.rho[c];
  }
  const fs::path csv = out_dir / "census.csv";
  write_csv(table, csv.string());

  ManifestWriter manifest("census", out_dir);
  ordered_json cfg;
  cfg["metric"] = "subgraph";
  cfg["exact"] = exact;
  manifest.set_config(cfg);
  manifest.add_input(dataset);
  manifest.add_output(csv);
  manifest.write();
  std::cout << "wrote " << records.size() << " density rows to "
            << csv.string() << "\n";
}

// ---------------------------------------------------------------- spectral

void run_spectral(const std::string& in, const std::string& out,
                  std::optional<double> lambda_min,
                  std::optional<double> lambda_max, int lambda_count,
                  bool force) {
  const fs::path out_dir = out;
  prepare_out_dir(out_dir, {"spectral.csv", "svalues.csv"}, force);
  const fs::path dataset = fs::path(in) / "dataset.jsonl";
  const auto records = load_dataset_sorted(dataset);
  const int n = common_node_count(records, 2);

  LambdaGrid grid;
  if (lambda_min || lambda_max) {
    const double hi = lambda_max.value_or(5.0 / (n - 1));
    const double lo = lambda_min.value_or(hi / lambda_count);
    if (!(lo > 0.0) || !(hi >= lo))
      throw ParameterError("spectral: bad lambda interval");
    grid.lambdas.resize(lambda_count);
    for (int j = 0; j < lambda_count; ++j)
      grid.lambdas[j] =
          lambda_count == 1
              ? hi
              : lo + (hi - lo) * static_cast<double>(j) / (lambda_count - 1);
  } else {
    grid = default_lambda_grid(n, lambda_count);
  }
  validate_grid(grid);

  CsvTable emb;
  emb.header = {"id"};
  for (const char* part : {"l", "d", "r"})
    for (int i = 0; i < n; ++i)
      emb.header.push_back(std::string(part) + std::to_string(i));
  emb.values.resize(static_cast<Eigen::Index>(records.size()), 3 * n);

  CsvTable svals;
  svals.header = {"id"};
  for (int j = 0; j < grid.size(); ++j)
    svals.header.push_back("s" + std::to_string(j));
  svals.values.resize(static_cast<Eigen::Index>(records.size()), grid.size());

  for (std::size_t r = 0; r < records.size(); ++r) {
    const SpectralCoarse c = spectral_coarse(records[r].graph);
    emb.ids.push_back(records[r].id);
    svals.ids.push_back(records[r].id);
    for (int i = 0; i < n; ++i) {
      emb.values(r, i) = c.l[i];
      emb.values(r, n + i) = c.d[i];
      emb.values(r, 2 * n + i) = c.r[i];
    }
    svals.values.row(r) = s_values(c, grid).transpose();
  }

  const fs::path emb_csv = out_dir / "spectral.csv";
  const fs::path svals_csv = out_dir / "svalues.csv";
  write_csv(emb, emb_csv.string());
  write_csv(svals, svals_csv.string());

  ManifestWriter manifest("spectral", out_dir);
  ordered_json cfg;
  cfg["metric"] = "spectral";
  cfg["lambda_grid"] = grid.lambdas;
  manifest.set_config(cfg);
  manifest.add_input(dataset);
  manifest.add_output(emb_csv);
  manifest.add_output(svals_csv);
  manifest.write();
  std::cout << "wrote spectral embeddings for " << records.size()
            << " graphs to " << out_dir.string() << "\n";
}

// ------------------------------------------------------------------ kernel

void run_kernel(const std::string& metric_name_str, const std::string& in,
                const std::string& out, std::optional<double> epsilon,
                bool force) {
  const Metric metric = metric_from_name(metric_name_str);
  const fs::path out_dir = out;
  prepare_out_dir(out_dir, {"distances.csv", "kernel.csv"}, force);

  const fs::path emb_file =
      fs::path(in) / (metric == Metric::kSubgraph ? "census.csv" : "svalues.csv");
  if (!fs::exists(emb_file))
    throw DataError("kernel --metric " + metric_name_str + " expects " +
                    emb_file.string());
  const auto stage = verify_stage_input(emb_file);

  ordered_json cfg;
  cfg["metric"] = metric_name_str;
  if (stage) {
    const std::string producer = (*stage)["command"].get<std::string>();
    const std::string expected =
        metric == Metric::kSubgraph ? "census" : "spectral";
    if (producer != expected)
      cli::refuse_mismatch(
          "kernel --metric " + metric_name_str + " cannot consume a '" +
              producer + "' stage",
          json{{"command", expected}, {"metric", metric_name_str}},
          json{{"command", producer}, {"config", (*stage)["config"]}});
    if (metric == Metric::kSpectral)
      cfg["lambda_grid"] = (*stage)["config"]["lambda_grid"];
  } else if (metric == Metric::kSpectral) {
    throw DataError(
        "kernel --metric spectral needs the spectral stage manifest (it "
        "carries the lambda grid); found none next to " +
        emb_file.string());
  }

  const CsvTable rows = read_csv(emb_file.string());
  const int m = static_cast<int>(rows.ids.size());
  if (m < 2) throw DataError("kernel: need at least two embedded graphs");

  DistanceMatrix dm;
  dm.metric.metric = metric;
  if (metric == Metric::kSpectral && cfg.contains("lambda_grid"))
    dm.metric.grid = grid_from_json(cfg["lambda_grid"]);
  dm.d = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      dm.d(i, j) = dm.d(j, i) =
          (rows.values.row(i) - rows.values.row(j)).norm();
  validate_distances(dm);

  const double eps = epsilon.value_or(median_epsilon(dm));
  const Eigen::MatrixXd w = gaussian_kernel(dm, eps);

  CsvTable dist_table{{"id"}, rows.ids, dm.d};
  CsvTable kern_table{{"id"}, rows.ids, w};
  for (const auto& id : rows.ids) {
    dist_table.header.push_back(id);
    kern_table.header.push_back(id);
  }
  const fs::path dist_csv = out_dir / "distances.csv";
  const fs::path kern_csv = out_dir / "kernel.csv";
  write_csv(dist_table, dist_csv.string());
  write_csv(kern_table, kern_csv.string());

  ManifestWriter manifest("kernel", out_dir);
  cfg["epsilon"] = eps;
  cfg["epsilon_source"] = epsilon ? "explicit" : "median";
  manifest.set_config(cfg);
  manifest.add_input(emb_file);
  manifest.add_output(dist_csv);
  manifest.add_output(kern_csv);
  manifest.write();
  std::cout << "wrote " << m << "x" << m << " distance and kernel matrices, "
            << "epsilon = " << eps << "\n";
}

// -------------------------------------------------------------------- dmap

void run_dmap(const std::string& in, const std::string& out, int k_eigs,
              bool force) {
  const fs::path out_dir = out;
  prepare_out_dir(
      out_dir, {"model.json", "coords.csv", "eigenvalues.csv", "harmonics.csv"},
      force);

  const fs::path dist_csv = fs::path(in) / "distances.csv";
  const auto kernel_stage = verify_stage_input(dist_csv);
  if (!kernel_stage)
    throw DataError("dmap: " + dist_csv.string() +
                    " has no stage manifest; run the kernel stage first");
  const json& kcfg = (*kernel_stage)["config"];
  const Metric metric = metric_from_name(kcfg["metric"].get<std::string>());
  const double epsilon = kcfg["epsilon"].get<double>();

  const CsvTable dist_rows = read_csv(dist_csv.string());
  const int m = static_cast<int>(dist_rows.ids.size());
  if (k_eigs > m)
    throw ParameterError("dmap: --k-eigs exceeds the dataset size " +
                         std::to_string(m));

  DistanceMatrix dm;
  dm.metric.metric = metric;
  if (metric == Metric::kSpectral)
    dm.metric.grid = grid_from_json(kcfg["lambda_grid"]);
  dm.d = dist_rows.values;
  validate_distances(dm);

  // The kernel stage recorded exactly which embedding file it consumed;
  // pull the reference embeddings from there for the standalone model file.
  fs::path emb_file;
  for (const auto& [path, entry] : (*kernel_stage)["inputs"].items())
    emb_file = path;
  if (emb_file.empty())
    throw DataError("dmap: kernel manifest lists no embedding input");
  verify_stage_input(emb_file);
  const CsvTable emb_rows = read_csv(emb_file.string());
  if (emb_rows.ids != dist_rows.ids)
    cli::refuse_mismatch("dmap: embedding ids disagree with distance ids",
                         json(dist_rows.ids), json(emb_rows.ids));

  const DiffusionMapModel model = fit_dmap(dm, epsilon, k_eigs);

  ModelFile mf;
  mf.model = model;
  mf.ids = dist_rows.ids;
  if (metric == Metric::kSubgraph) {
    if (emb_rows.values.cols() != kMotifCount)
      throw DataError("dmap: census file does not have 9 density columns");
    for (int i = 0; i < m; ++i) {
      DensityVector rho;
      for (int c = 0; c < kMotifCount; ++c) rho.rho[c] = emb_rows.values(i, c);
      mf.density.push_back(rho);
    }
  } else {
    mf.s_rows = emb_rows.values;
  }
  const fs::path model_path = out_dir / "model.json";
  write_model(mf, model_path.string());

  CsvTable coords{{"id"}, dist_rows.ids,
                  model.coords.rightCols(model.eig_count() - 1)};
  for (int j = 2; j <= model.eig_count(); ++j)
    coords.header.push_back("phi" + std::to_string(j));
  const fs::path coords_csv = out_dir / "coords.csv";
  write_csv(coords, coords_csv.string());

  CsvTable eigs;
  eigs.header = {"k", "lambda"};
  eigs.values.resize(model.eig_count(), 1);
  for (int j = 0; j < model.eig_count(); ++j) {
    eigs.ids.push_back(std::to_string(j + 1));
    eigs.values(j, 0) = model.eigenvalues[j];
  }
  const fs::path eigs_csv = out_dir / "eigenvalues.csv";
  write_csv(eigs, eigs_csv.string());

  // Harmonic diagnostic: R^2 of each later eigenvector on phi2.
  ManifestWriter manifest("dmap", out_dir);
  ordered_json cfg;
  cfg["metric"] = std::string(metric_name(metric));
  cfg["epsilon"] = epsilon;
  cfg["k_eigs"] = k_eigs;
  if (metric == Metric::kSpectral) cfg["lambda_grid"] = kcfg["lambda_grid"];
  manifest.set_config(cfg);
  manifest.add_input(dist_csv);
  manifest.add_input(emb_file);
  manifest.add_output(model_path);
  manifest.add_output(coords_csv);
  manifest.add_output(eigs_csv);
  if (model.eig_count() >= 3 && m >= 8) {
    CsvTable harm;
    harm.header = {"k", "r2_on_phi2"};
    harm.values.resize(model.eig_count() - 2, 1);
    for (int j = 2; j < model.eig_count(); ++j) {
      harm.ids.push_back(std::to_string(j + 1));
      harm.values(j - 2, 0) =
          harmonic_r2(model.coords.col(1), model.coords.col(j), 5);
    }
    const fs::path harm_csv = out_dir / "harmonics.csv";
    write_csv(harm, harm_csv.string());
    manifest.add_output(harm_csv);
  }
  manifest.write();
  std::cout << "wrote diffusion-map model (" << m << " points, " << k_eigs
            << " eigenpairs) to " << out_dir.string() << "\n";
}

// ----------------------------------------------------------------- nystrom

void run_nystrom(const std::string& model_dir, const std::string& in,
                 const std::string& out,
                 const std::string& metric_override, bool force) {
  const fs::path out_dir = out;
  prepare_out_dir(out_dir, {"nystrom.csv"}, force);

  const fs::path model_path = fs::path(model_dir) / "model.json";
  const auto model_stage = verify_stage_input(model_path);
  const ModelFile mf = read_model(model_path.string());

  if (!metric_override.empty() &&
      metric_from_name(metric_override) != mf.model.metric.metric) {
    json expected{{"metric", metric_override}};
    json actual{{"metric", std::string(metric_name(mf.model.metric.metric))}};
    if (model_stage) actual["config"] = (*model_stage)["config"];
    cli::refuse_mismatch(
        "nystrom: requested metric disagrees with the model's metric",
        expected, actual);
  }

  const fs::path dataset = fs::path(in) / "dataset.jsonl";
  const auto records = load_dataset_sorted(dataset);
  if (records.empty()) throw DataError("nystrom: empty dataset");

  const int k = mf.model.eig_count();
  CsvTable table;
  table.header = {"id"};
  for (int j = 2; j <= k; ++j)
    table.header.push_back("phi" + std::to_string(j));
  table.values.resize(static_cast<Eigen::Index>(records.size()), k - 1);
  for (std::size_t r = 0; r < records.size(); ++r) {
    table.ids.push_back(records[r].id);
    const Eigen::VectorXd coords =
        nystrom_extend(mf.model, model_distances(mf, records[r].graph));
    table.values.row(r) = coords.tail(k - 1).transpose();
  }
  const fs::path csv = out_dir / "nystrom.csv";
  write_csv(table, csv.string());

  ManifestWriter manifest("nystrom", out_dir);
  ordered_json cfg;
  cfg["metric"] = std::string(metric_name(mf.model.metric.metric));
  cfg["epsilon"] = mf.model.epsilon;
  manifest.set_config(cfg);
  manifest.add_input(model_path);
  manifest.add_input(dataset);
  manifest.add_output(csv);
  manifest.write();
  std::cout << "extended " << records.size() << " graphs to " << csv.string()
            << "\n";
}

// --------------------------------------------------------------------- pca

void run_pca(const std::string& in, const std::string& out, int components,
             bool force) {
  const fs::path out_dir = out;
  prepare_out_dir(out_dir, {"pca_model.json", "projections.csv"}, force);
  const fs::path dataset = fs::path(in) / "dataset.jsonl";
  const auto records = load_dataset_sorted(dataset);
  const int n = common_node_count(records, 1);
  const int s = static_cast<int>(records.size());

  Eigen::MatrixXd rows(s, n);
  for (int r = 0; r < s; ++r) {
    const auto hist = degree_histogram(records[r].graph).normalized();
    for (int c = 0; c < n; ++c) rows(r, c) = hist[c];
  }
  validate_histogram_matrix(rows);

  const PcaModel model = fit_pca(rows, components);

  ordered_json mj;
  mj["format"] = "graphdm-pca";
  mj["mean"] = std::vector<double>(model.mean.data(),
                                   model.mean.data() + model.mean.size());
  ordered_json comps = ordered_json::array();
  for (int j = 0; j < model.component_count(); ++j) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < model.dim(); ++c) row.push_back(model.components(j, c));
    comps.push_back(std::move(row));
  }
  mj["components"] = std::move(comps);
  mj["variances"] = std::vector<double>(
      model.variances.data(), model.variances.data() + model.variances.size());
  const fs::path model_path = out_dir / "pca_model.json";
  std::ofstream(model_path) << mj.dump(2) << '\n';

  CsvTable table;
  table.header = {"id"};
  for (int j = 1; j <= components; ++j)
    table.header.push_back("pc" + std::to_string(j));
  table.values.resize(s, components);
  for (int r = 0; r < s; ++r) {
    table.ids.push_back(records[r].id);
    table.values.row(r) =
        project(model, rows.row(r).transpose()).transpose();
  }
  const fs::path csv = out_dir / "projections.csv";
  write_csv(table, csv.string());

  ManifestWriter manifest("pca", out_dir);
  ordered_json cfg;
  cfg["components"] = components;
  cfg["normalized_histograms"] = true;
  manifest.set_config(cfg);
  manifest.add_input(dataset);
  manifest.add_output(model_path);
  manifest.add_output(csv);
  manifest.write();
  std::cout << "wrote PCA model and " << s << " projections to "
            << out_dir.string() << "\n";
}

// ---------------------------------------------------------------- jacobian

void run_jacobian(const std::string& coords_dir, const std::string& pair_text,
                  int k_nn, const std::string& projections_dir,
                  const std::string& params_text, const std::string& dataset_dir,
                  const std::string& out, bool force) {
  const fs::path out_dir = out;
  prepare_out_dir(out_dir, {"jacobian.csv"}, force);

  const fs::path coords_csv = fs::path(coords_dir) / "coords.csv";
  verify_stage_input(coords_csv);
  const CsvTable coords_rows = read_csv(coords_csv.string());
  const int k_eigs = static_cast<int>(coords_rows.values.cols()) + 1;
  const auto [col_a, col_b] = parse_pair(pair_text, k_eigs);
  const int m = static_cast<int>(coords_rows.ids.size());

  Eigen::MatrixXd coords(m, 2);
  coords.col(0) = coords_rows.values.col(col_a - 1);  // coords.csv omits phi1
  coords.col(1) = coords_rows.values.col(col_b - 1);

  // targets: pca projections or named generation parameters
  Eigen::MatrixXd targets(m, 2);
  fs::path target_file;
  if (!projections_dir.empty()) {
    target_file = fs::path(projections_dir) / "projections.csv";
    verify_stage_input(target_file);
    const CsvTable proj = read_csv(target_file.string());
    if (proj.ids != coords_rows.ids)
      cli::refuse_mismatch("jacobian: projection ids disagree with coords ids",
                           json(coords_rows.ids), json(proj.ids));
    if (proj.values.cols() < 2)
      throw DataError("jacobian: projections.csv has fewer than 2 components");
    targets = proj.values.leftCols(2);
  } else {
    if (params_text.empty() || dataset_dir.empty())
      throw ParameterError(
          "jacobian: pass either --projections, or --params p,r with "
          "--dataset");
    const auto comma = params_text.find(',');
    if (comma == std::string::npos)
      throw ParameterError("jacobian: --params expects two names, e.g. p,r");
    const std::string pa = params_text.substr(0, comma);
    const std::string pb = params_text.substr(comma + 1);
    target_file = fs::path(dataset_dir) / "dataset.jsonl";
    const auto records = load_dataset_sorted(target_file);
    if (static_cast<int>(records.size()) != m)
      throw DataError("jacobian: dataset size disagrees with coords rows");
    for (int i = 0; i < m; ++i) {
      if (records[i].id != coords_rows.ids[i])
        cli::refuse_mismatch("jacobian: dataset ids disagree with coords ids",
                             json(coords_rows.ids[i]), json(records[i].id));
      if (!records[i].params.count(pa) || !records[i].params.count(pb))
        throw DataError("jacobian: record " + records[i].id +
                        " lacks parameter " + pa + " or " + pb);
      targets(i, 0) = records[i].params.at(pa);
      targets(i, 1) = records[i].params.at(pb);
    }
  }

  const JacobianField field = jacobian_field(coords, targets, k_nn);

  CsvTable table;
  table.header = {"id",  "dj11", "dj12",    "dj21",
                  "dj22", "det",  "flagged", "neighborhood"};
  table.values.resize(m, 7);
  int flagged = 0;
  for (int i = 0; i < m; ++i) {
    const auto& p = field.points[i];
    table.ids.push_back(coords_rows.ids[i]);
    table.values(i, 0) = p.jac(0, 0);
    table.values(i, 1) = p.jac(0, 1);
    table.values(i, 2) = p.jac(1, 0);
    table.values(i, 3) = p.jac(1, 1);
    table.values(i, 4) = p.det;
    table.values(i, 5) = p.flagged ? 1.0 : 0.0;
    table.values(i, 6) = p.neighborhood;
    if (p.flagged) ++flagged;
  }
  const fs::path csv = out_dir / "jacobian.csv";
  write_csv(table, csv.string());

  ManifestWriter manifest("jacobian", out_dir);
  ordered_json cfg;
  cfg["pair"] = pair_text;
  cfg["k_nn"] = k_nn;
  cfg["targets"] = projections_dir.empty() ? "params:" + params_text
                                           : "projections";
  cfg["sign_constancy"] = field.sign_constancy();
  cfg["flagged"] = flagged;
  manifest.set_config(cfg);
  manifest.add_input(coords_csv);
  manifest.add_input(target_file);
  manifest.add_output(csv);
  manifest.write();
  std::cout << "jacobian sign constancy " << field.sign_constancy() << " ("
            << flagged << " flagged of " << m << ")\n";
}

// --------------------------------------------------------------------- cpi

void run_cpi(const std::string& dataset_dir, const std::string& model_dir,
             const std::string& pair_text, const CpiConfig& cfg_in,
             double init_p, std::uint64_t init_seed, const std::string& out,
             bool force) {
  const fs::path out_dir = out;
  prepare_out_dir(out_dir, {"trajectory.csv", "lift_diagnostics.csv"}, force);
  fs::create_directories(out_dir / "hists");

  const fs::path dataset = fs::path(dataset_dir) / "dataset.jsonl";
  const fs::path model_path = fs::path(model_dir) / "model.json";
  auto records = load_dataset_sorted(dataset);
  verify_stage_input(model_path);
  const ModelFile mf = read_model(model_path.string());

  std::vector<std::string> record_ids;
  for (const auto& rec : records) record_ids.push_back(rec.id);
  std::vector<std::string> model_ids = mf.ids;
  std::sort(model_ids.begin(), model_ids.end());
  if (record_ids != model_ids)
    cli::refuse_mismatch("cpi: model ids disagree with reference dataset ids",
                         json(model_ids), json(record_ids));

  const auto pair = parse_pair(pair_text, mf.model.eig_count());
  const ReferenceDataset ref =
      make_reference(std::move(records), mf.model, pair);

  const int n = common_node_count(ref.records);
  const Graph g0 = generate_er(n, init_p, init_seed);
  const auto trajectory = cpi_run(g0, cfg_in, ref);

  const std::string phi_a = "phi" + pair_text.substr(0, pair_text.find(','));
  const std::string phi_b = "phi" + pair_text.substr(pair_text.find(',') + 1);

  std::ofstream traj_out(out_dir / "trajectory.csv");
  traj_out << "step,fine_steps_used," << phi_a << ',' << phi_b
           << ",mean_edges,hist_file\n";
  std::ofstream diag_out(out_dir / "lift_diagnostics.csv");
  diag_out << "step,residual,rank,coeff_min,coeff_max,coeff_sum,in_hull\n";
  for (const auto& step : trajectory) {
    const std::string hist_name =
        "hists/step_" + pad_index(step.step, 4) + ".csv";
    std::ofstream hist_out(out_dir / hist_name);
    hist_out << "degree,frequency\n";
    for (std::size_t d = 0; d < step.degree_hist.size(); ++d)
      hist_out << d << ',' << format_double(step.degree_hist[d]) << '\n';

    traj_out << step.step << ',' << step.fine_steps_used << ','
             << format_double(step.phi.x()) << ','
             << format_double(step.phi.y()) << ','
             << format_double(step.mean_edges) << ',' << hist_name << '\n';
    diag_out << step.step << ',' << format_double(step.lift_residual) << ','
             << step.lift_rank << ',' << format_double(step.coeff_min) << ','
             << format_double(step.coeff_max) << ','
             << format_double(step.coeff_sum) << ','
             << (step.in_hull ? 1 : 0) << '\n';
    if (!step.in_hull)
      std::cerr << "warning: step " << step.step
                << " projected outside the reference hull\n";
  }
  traj_out.close();
  diag_out.close();

  ManifestWriter manifest("cpi", out_dir);
  ordered_json cfg;
  cfg["t_burst"] = cfg_in.t_burst;
  cfg["t_project"] = cfg_in.t_project;
  cfg["steps_per_timestep"] = cfg_in.steps_per_timestep;
  cfg["k_runs"] = cfg_in.k_runs;
  cfg["n_neighbors"] = cfg_in.n_neighbors;
  cfg["coarse_steps"] = cfg_in.coarse_steps;
  cfg["r_remove"] = cfg_in.r_remove;
  cfg["seed"] = cfg_in.seed;
  cfg["pair"] = pair_text;
  cfg["init_p"] = init_p;
  cfg["init_seed"] = init_seed;
  manifest.set_config(cfg);
  manifest.add_input(dataset);
  manifest.add_input(model_path);
  manifest.add_output(out_dir / "trajectory.csv");
  manifest.add_output(out_dir / "lift_diagnostics.csv");
  manifest.write();
  std::cout << "ran " << cfg_in.coarse_steps << " coarse steps; trajectory in "
            << out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "graphdm: diffusion-map embeddings of graph ensembles and "
      "equation-free coarse projective integration"};
  app.require_subcommand(1);

  // generate
  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "sample a graph dataset");
  generate->add_option("--kind", gen.kind, "er | chung-lu | evolve")
      ->required()
      ->check(CLI::IsMember({"er", "chung-lu", "evolve"}));
  generate->add_option("--count", gen.count,
                       "graphs (er, chung-lu) or trajectories (evolve)");
  generate->add_option("--nodes", gen.nodes, "nodes per graph");
  generate->add_option("--seed", gen.seed, "master seed");
  generate->add_option("--p-min", gen.p_min, "lower edge-density parameter");
  generate->add_option("--p-max", gen.p_max, "upper edge-density parameter");
  generate->add_option("--r-min", gen.r_min, "lower skew parameter (chung-lu)");
  generate->add_option("--r-max", gen.r_max, "upper skew parameter (chung-lu)");
  generate->add_option("--steps", gen.steps, "evolution steps (evolve)");
  generate->add_option("--snapshot-every", gen.snapshot_every,
                       "snapshot interval (evolve)");
  generate->add_option("--r-remove", gen.r_remove,
                       "edge removal probability (evolve)");
  generate->add_option("--out", gen.out, "output directory")->required();
  generate->add_flag("--force", gen.force, "overwrite existing outputs");

  // census
  std::string census_in, census_out;
  bool census_exact = false, census_force = false;
  auto* census_cmd =
      app.add_subcommand("census", "9-motif subgraph densities per graph");
  census_cmd->add_option("--in", census_in, "generate stage directory")
      ->required();
  census_cmd->add_option("--out", census_out, "output directory")->required();
  census_cmd->add_flag("--exact", census_exact,
                       "use ESU enumeration instead of the closed-form path");
  census_cmd->add_flag("--force", census_force, "overwrite existing outputs");

  // spectral
  std::string spectral_in, spectral_out;
  std::optional<double> lambda_min, lambda_max;
  int lambda_count = 100;
  bool spectral_force = false;
  auto* spectral_cmd = app.add_subcommand(
      "spectral", "coarse spectral embeddings and S(lambda) rows");
  spectral_cmd->add_option("--in", spectral_in, "generate stage directory")
      ->required();
  spectral_cmd->add_option("--out", spectral_out, "output directory")
      ->required();
  spectral_cmd->add_option("--lambda-min", lambda_min, "grid lower end");
  spectral_cmd->add_option("--lambda-max", lambda_max, "grid upper end");
  spectral_cmd->add_option("--lambda-count", lambda_count, "grid size");
  spectral_cmd->add_flag("--force", spectral_force,
                         "overwrite existing outputs");

  // kernel
  std::string kernel_metric, kernel_in, kernel_out;
  std::optional<double> kernel_epsilon;
  bool kernel_force = false;
  auto* kernel_cmd = app.add_subcommand(
      "kernel", "pairwise distances and the Gaussian kernel matrix");
  kernel_cmd->add_option("--metric", kernel_metric, "subgraph | spectral")
      ->required()
      ->check(CLI::IsMember({"subgraph", "spectral"}));
  kernel_cmd->add_option("--in", kernel_in, "census or spectral stage directory")
      ->required();
  kernel_cmd->add_option("--out", kernel_out, "output directory")->required();
  kernel_cmd->add_option("--epsilon", kernel_epsilon,
                         "kernel scale (default: median off-diagonal distance)");
  kernel_cmd->add_flag("--force", kernel_force, "overwrite existing outputs");

  // dmap
  std::string dmap_in, dmap_out;
  int k_eigs = 10;
  bool dmap_force = false;
  auto* dmap_cmd = app.add_subcommand(
      "dmap", "diffusion-map eigendecomposition of the kernel");
  dmap_cmd->add_option("--in", dmap_in, "kernel stage directory")->required();
  dmap_cmd->add_option("--out", dmap_out, "output directory")->required();
  dmap_cmd->add_option("--k-eigs", k_eigs, "eigenpairs to keep");
  dmap_cmd->add_flag("--force", dmap_force, "overwrite existing outputs");

  // nystrom
  std::string nystrom_model, nystrom_in, nystrom_out, nystrom_metric;
  bool nystrom_force = false;
  auto* nystrom_cmd = app.add_subcommand(
      "nystrom", "out-of-sample extension of new graphs against a model");
  nystrom_cmd->add_option("--model", nystrom_model, "dmap stage directory")
      ->required();
  nystrom_cmd->add_option("--in", nystrom_in, "dataset directory of new graphs")
      ->required();
  nystrom_cmd->add_option("--out", nystrom_out, "output directory")->required();
  nystrom_cmd->add_option("--metric", nystrom_metric,
                          "cross-check against the model's metric");
  nystrom_cmd->add_flag("--force", nystrom_force, "overwrite existing outputs");

  // pca
  std::string pca_in, pca_out;
  int pca_components = 2;
  bool pca_force = false;
  auto* pca_cmd = app.add_subcommand(
      "pca", "PCA of the normalized degree histograms");
  pca_cmd->add_option("--in", pca_in, "generate stage directory")->required();
  pca_cmd->add_option("--out", pca_out, "output directory")->required();
  pca_cmd->add_option("--components", pca_components, "components to keep");
  pca_cmd->add_flag("--force", pca_force, "overwrite existing outputs");

  // jacobian
  std::string jac_coords, jac_pair = "2,3", jac_projections, jac_params,
              jac_dataset, jac_out;
  int jac_knn = 16;
  bool jac_force = false;
  auto* jac_cmd = app.add_subcommand(
      "jacobian", "local Jacobian field of targets on an eigenvector pair");
  jac_cmd->add_option("--coords", jac_coords, "dmap stage directory")
      ->required();
  jac_cmd->add_option("--pair", jac_pair, "eigenvector pair, e.g. 2,3");
  jac_cmd->add_option("--k-nn", jac_knn, "neighborhood size");
  jac_cmd->add_option("--projections", jac_projections,
                      "pca stage directory (targets)");
  jac_cmd->add_option("--params", jac_params,
                      "two generation parameter names, e.g. p,r (targets)");
  jac_cmd->add_option("--dataset", jac_dataset,
                      "generate stage directory (with --params)");
  jac_cmd->add_option("--out", jac_out, "output directory")->required();
  jac_cmd->add_flag("--force", jac_force, "overwrite existing outputs");

  // cpi
  std::string cpi_dataset, cpi_model, cpi_pair = "2,3", cpi_out;
  CpiConfig cpi_cfg;
  double cpi_init_p = 0.05;
  std::uint64_t cpi_init_seed = 1;
  bool cpi_force = false;
  auto* cpi_cmd = app.add_subcommand(
      "cpi", "coarse projective integration against a reference dataset");
  cpi_cmd->add_option("--dataset", cpi_dataset,
                      "generate stage directory of the reference snapshots")
      ->required();
  cpi_cmd->add_option("--model", cpi_model, "dmap stage directory")->required();
  cpi_cmd->add_option("--pair", cpi_pair, "eigenvector pair, e.g. 2,3");
  cpi_cmd->add_option("--t-burst", cpi_cfg.t_burst, "burst length, timesteps");
  cpi_cmd->add_option("--t-project", cpi_cfg.t_project,
                      "projection length, timesteps");
  cpi_cmd->add_option("--steps-per-timestep", cpi_cfg.steps_per_timestep,
                      "rule iterations per timestep");
  cpi_cmd->add_option("--k-runs", cpi_cfg.k_runs, "replicas per burst");
  cpi_cmd->add_option("--neighbors", cpi_cfg.n_neighbors,
                      "lifted ensemble size N");
  cpi_cmd->add_option("--coarse-steps", cpi_cfg.coarse_steps, "CPI iterations");
  cpi_cmd->add_option("--r-remove", cpi_cfg.r_remove,
                      "edge removal probability");
  cpi_cmd->add_option("--seed", cpi_cfg.seed, "simulation seed");
  cpi_cmd->add_option("--init-p", cpi_init_p, "initial ER edge probability");
  cpi_cmd->add_option("--init-seed", cpi_init_seed, "initial ER seed");
  cpi_cmd->add_option("--out", cpi_out, "output directory")->required();
  cpi_cmd->add_flag("--force", cpi_force, "overwrite existing outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) run_generate(gen);
    if (census_cmd->parsed())
      run_census(census_in, census_out, census_exact, census_force);
    if (spectral_cmd->parsed())
      run_spectral(spectral_in, spectral_out, lambda_min, lambda_max,
                   lambda_count, spectral_force);
    if (kernel_cmd->parsed())
      run_kernel(kernel_metric, kernel_in, kernel_out, kernel_epsilon,
                 kernel_force);
    if (dmap_cmd->parsed()) run_dmap(dmap_in, dmap_out, k_eigs, dmap_force);
    if (nystrom_cmd->parsed())
      run_nystrom(nystrom_model, nystrom_in, nystrom_out, nystrom_metric,
                  nystrom_force);
    if (pca_cmd->parsed()) run_pca(pca_in, pca_out, pca_components, pca_force);
    if (jac_cmd->parsed())
      run_jacobian(jac_coords, jac_pair, jac_knn, jac_projections, jac_params,
                   jac_dataset, jac_out, jac_force);
    if (cpi_cmd->parsed())
      run_cpi(cpi_dataset, cpi_model, cpi_pair, cpi_cfg, cpi_init_p,
              cpi_init_seed, cpi_out, cpi_force);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
