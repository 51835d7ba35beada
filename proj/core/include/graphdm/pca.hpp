#pragma once

#include <Eigen/Core>

namespace graphdm {

/// Mean-centered PCA fitted by SVD. components rows are orthonormal and
/// ordered by non-increasing explained variance; each component's sign is
/// fixed so its inner product with the mean row is nonnegative (first
/// nonzero coordinate positive when that product is exactly zero).
struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // k x n, row per component
  Eigen::VectorXd variances;   // k, non-increasing

  int dim() const { return static_cast<int>(mean.size()); }
  int component_count() const { return static_cast<int>(components.rows()); }
};

/// Validates a histogram matrix: rows sum to 1 within 1e-12, entries >= 0.
void validate_histogram_matrix(const Eigen::MatrixXd& h);

/// Fits k components to the s x n row matrix (s >= 2, k <= min(s, n)).
/// Throws NumericError when the rows are all identical (zero variance).
PcaModel fit_pca(const Eigen::MatrixXd& rows, int k);

/// Projections of one row onto the components: entry j is
/// (h - mean) . component_j.
Eigen::VectorXd project(const PcaModel& model, const Eigen::VectorXd& h);

}  // namespace graphdm
