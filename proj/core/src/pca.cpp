#include "graphdm/pca.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "graphdm/error.hpp"

namespace graphdm {

void validate_histogram_matrix(const Eigen::MatrixXd& h) {
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    if (std::abs(h.row(i).sum() - 1.0) > 1e-12)
      throw DataError("histogram row " + std::to_string(i) +
                      " does not sum to 1");
    if ((h.row(i).array() < 0.0).any())
      throw DataError("histogram row " + std::to_string(i) +
                      " has negative entries");
  }
}

PcaModel fit_pca(const Eigen::MatrixXd& rows, int k) {
  const int s = static_cast<int>(rows.rows());
  const int n = static_cast<int>(rows.cols());
  if (s < 2) throw ParameterError("fit_pca: need at least two rows");
  if (k < 1 || k > std::min(s, n))
    throw ParameterError("fit_pca: k must lie in [1, min(rows, cols)]");

  PcaModel model;
  model.mean = rows.colwise().mean();
  const Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();
  if (centered.cwiseAbs().maxCoeff() == 0.0)
    throw NumericError("fit_pca: all rows identical, variance is zero");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      centered, Eigen::ComputeThinU | Eigen::ComputeThinV);

  model.components.resize(k, n);
  model.variances.resize(k);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd comp = svd.matrixV().col(j);
    const double along_mean = comp.dot(model.mean);
    if (along_mean < 0.0) {
      comp = -comp;
    } else if (along_mean == 0.0) {
      for (int i = 0; i < n; ++i) {
        if (comp[i] != 0.0) {
          if (comp[i] < 0.0) comp = -comp;
          break;
        }
      }
    }
    model.components.row(j) = comp.transpose();
    const double sigma = svd.singularValues()[j];
    model.variances[j] = sigma * sigma / (s - 1);
  }
  return model;
}

Eigen::VectorXd project(const PcaModel& model, const Eigen::VectorXd& h) {
  if (h.size() != model.dim())
    throw ParameterError("project: row length " + std::to_string(h.size()) +
                         " does not match model dimension " +
                         std::to_string(model.dim()));
  return model.components * (h - model.mean);
}

}  // namespace graphdm
