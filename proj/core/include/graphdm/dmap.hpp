#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graphdm/census.hpp"
#include "graphdm/dataset.hpp"
#include "graphdm/spectral.hpp"

namespace graphdm {

enum class Metric { kSubgraph, kSpectral };

std::string_view metric_name(Metric m);
Metric metric_from_name(std::string_view name);

/// Metric choice plus its parameters (the lambda grid matters only for the
/// spectral metric; it must match the grid the embeddings were built with).
struct MetricConfig {
  Metric metric = Metric::kSubgraph;
  LambdaGrid grid;  // ignored for the subgraph metric

  bool operator==(const MetricConfig&) const = default;
};

/// Symmetric pairwise distances with a zero diagonal, tagged by the metric
/// that produced them.
struct DistanceMatrix {
  Eigen::MatrixXd d;
  MetricConfig metric;

  int size() const { return static_cast<int>(d.rows()); }
};

/// Checks symmetry (1e-12), nonnegativity, and zero diagonal.
void validate_distances(const DistanceMatrix& dm);

DistanceMatrix pairwise_distances(const std::vector<DensityVector>& rho);
DistanceMatrix pairwise_distances(const std::vector<SpectralCoarse>& emb,
                                  const LambdaGrid& grid);
/// Computes per-graph embeddings for the metric, then delegates. All graphs
/// must share one node count.
DistanceMatrix pairwise_distances(const std::vector<GraphRecord>& records,
                                  const MetricConfig& metric);

/// Median of the off-diagonal distances, the default kernel scale.
double median_epsilon(const DistanceMatrix& dm);

/// Gaussian kernel W_ij = exp(-d_ij^2 / epsilon^2); unit diagonal.
Eigen::MatrixXd gaussian_kernel(const DistanceMatrix& dm, double epsilon);

/// Row-normalizes W into the Markov matrix A = D^-1 W and returns the row
/// sums alongside. Row sums of A are 1 to within 1e-12 by construction.
struct MarkovResult {
  Eigen::MatrixXd a;
  Eigen::VectorXd row_sums;
};
MarkovResult markov_normalize(const Eigen::MatrixXd& w);

/// Diffusion-map model: top-k eigenpairs of the Markov matrix plus what the
/// out-of-sample extension needs (epsilon, W row sums, metric tag).
/// eigenvalues are descending with eigenvalues[0] == 1; coords column j is
/// the eigenvector phi_j, unit Euclidean norm, first nonzero entry positive;
/// column 0 is the trivial constant direction.
struct DiffusionMapModel {
  double epsilon = 0.0;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd coords;
  Eigen::VectorXd row_sums;
  MetricConfig metric;

  int point_count() const { return static_cast<int>(coords.rows()); }
  int eig_count() const { return static_cast<int>(coords.cols()); }
};

/// Top-k right eigenpairs of A = D^-1 W, computed through the symmetric
/// conjugate D^-1/2 W D^-1/2 (same spectrum, real; eigenvectors mapped back
/// by D^-1/2). k <= m. Throws NumericError if the solver fails.
DiffusionMapModel dmap_eigs(const Eigen::MatrixXd& w, double epsilon,
                            const MetricConfig& metric, int k);

/// Convenience: distances -> kernel -> Markov -> eigenpairs.
DiffusionMapModel fit_dmap(const DistanceMatrix& dm, double epsilon, int k);

/// Nystrom out-of-sample extension. d_new holds the new point's distances
/// to the m reference points; the result is the new point's coordinate in
/// every model eigenvector (entry j = phi_new(j)). Entries whose eigenvalue
/// is below 1e-12 in magnitude raise NumericError when requested; pass
/// skip_degenerate to zero them instead.
Eigen::VectorXd nystrom_extend(const DiffusionMapModel& model,
                               const Eigen::VectorXd& d_new,
                               bool skip_degenerate = false);

/// Harmonic diagnostic: R^2 of a polynomial regression of y on x (degree
/// >= 1). R^2 near 1 flags y as a function (higher harmonic) of x rather
/// than an independent direction.
double harmonic_r2(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   int degree);

}  // namespace graphdm
