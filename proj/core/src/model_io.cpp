#include "graphdm/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "graphdm/error.hpp"

namespace graphdm {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json vector_to_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : 0;
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols)
      throw DataError("model file: ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

}  // namespace

void write_model(const ModelFile& mf, const std::string& path) {
  ordered_json j;
  j["format"] = "graphdm-model";
  j["epsilon"] = mf.model.epsilon;
  j["metric"] = std::string(metric_name(mf.model.metric.metric));
  if (mf.model.metric.metric == Metric::kSpectral)
    j["lambda_grid"] = mf.model.metric.grid.lambdas;
  j["eigenvalues"] = vector_to_json(mf.model.eigenvalues);
  j["coords"] = matrix_to_json(mf.model.coords);
  j["row_sums"] = vector_to_json(mf.model.row_sums);
  j["ids"] = mf.ids;
  if (mf.model.metric.metric == Metric::kSubgraph) {
    ordered_json dens = ordered_json::array();
    for (const auto& rho : mf.density) {
      ordered_json row = ordered_json::array();
      for (double x : rho.rho) row.push_back(x);
      dens.push_back(std::move(row));
    }
    j["embeddings"] = std::move(dens);
  } else {
    j["embeddings"] = matrix_to_json(mf.s_rows);
  }

  std::ofstream out(path);
  if (!out) throw DataError("cannot open model file for write: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("failed writing model file: " + path);
}

ModelFile read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed model file " + path + ": " + e.what());
  }
  if (j.value("format", "") != "graphdm-model")
    throw DataError("not a graphdm model file: " + path);

  ModelFile mf;
  try {
    mf.model.epsilon = j.at("epsilon").get<double>();
    mf.model.metric.metric = metric_from_name(j.at("metric").get<std::string>());
    if (mf.model.metric.metric == Metric::kSpectral) {
      mf.model.metric.grid.lambdas =
          j.at("lambda_grid").get<std::vector<double>>();
      validate_grid(mf.model.metric.grid);
    }
    mf.model.eigenvalues = vector_from_json(j.at("eigenvalues"));
    mf.model.coords = matrix_from_json(j.at("coords"));
    mf.model.row_sums = vector_from_json(j.at("row_sums"));
    mf.ids = j.at("ids").get<std::vector<std::string>>();
    if (mf.model.metric.metric == Metric::kSubgraph) {
      for (const auto& row : j.at("embeddings")) {
        if (row.size() != kMotifCount)
          throw DataError("model file: density row is not 9 long");
        DensityVector rho;
        for (int c = 0; c < kMotifCount; ++c) rho.rho[c] = row.at(c).get<double>();
        mf.density.push_back(rho);
      }
    } else {
      mf.s_rows = matrix_from_json(j.at("embeddings"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad model file " + path + ": " + e.what());
  }

  const auto m = static_cast<std::size_t>(mf.model.point_count());
  if (mf.ids.size() != m)
    throw DataError("model file: id count does not match coordinate rows");
  if (mf.model.metric.metric == Metric::kSubgraph
          ? mf.density.size() != m
          : static_cast<std::size_t>(mf.s_rows.rows()) != m)
    throw DataError("model file: embedding count does not match rows");
  return mf;
}

Eigen::VectorXd model_distances(const ModelFile& mf, const Graph& g) {
  const int m = mf.model.point_count();
  Eigen::VectorXd d(m);
  if (mf.model.metric.metric == Metric::kSubgraph) {
    const DensityVector rho = census_fast(g);
    for (int i = 0; i < m; ++i) d[i] = subgraph_distance(rho, mf.density[i]);
  } else {
    const Eigen::VectorXd row =
        s_values(spectral_coarse(g), mf.model.metric.grid);
    for (int i = 0; i < m; ++i)
      d[i] = (row - mf.s_rows.row(i).transpose()).norm();
  }
  return d;
}

}  // namespace graphdm
