#pragma once

#include <Eigen/Core>

#include "graphdm/graph.hpp"

namespace graphdm {

/// Coarse spectral embedding of one graph: with the adjacency
/// eigendecomposition B = P D P^T and weighting vectors p_hat, q_hat
/// (uniform 1/n by default), the 3n numbers
///   l = P^T q_hat,   d = diag(D),   r = P^T p_hat
/// determine the weighted walk sum S(lambda) = l^T exp(lambda D) r without
/// touching the graph again. Eigenvalues are sorted descending; l and r are
/// permuted consistently. With uniform weights l == r bit-for-bit, and the
/// traceless adjacency gives sum(d) == 0.
struct SpectralCoarse {
  Eigen::VectorXd l;
  Eigen::VectorXd d;
  Eigen::VectorXd r;

  int size() const { return static_cast<int>(d.size()); }
};

/// Strictly increasing evaluation points for S(lambda).
struct LambdaGrid {
  std::vector<double> lambdas;

  int size() const { return static_cast<int>(lambdas.size()); }
  bool operator==(const LambdaGrid&) const = default;
};

/// Validates monotonicity/finiteness; throws ParameterError.
void validate_grid(const LambdaGrid& grid);

/// Default grid: `count` values uniformly spaced in (0, 5/(n-1)], so that
/// lambda times the spectral radius stays around 5 and exp(lambda d) spans a
/// moderate dynamic range at any graph size.
LambdaGrid default_lambda_grid(int n, int count = 100);

/// Full symmetric eigendecomposition of the 0/1 adjacency with uniform
/// weighting vectors. Throws NumericError if the eigensolver fails.
SpectralCoarse spectral_coarse(const Graph& g);

/// Same with explicit weighting vectors (q_hat scores the walker density,
/// p_hat is the initial distribution) for embedding prior knowledge into
/// the kernel. Both must have length n.
SpectralCoarse spectral_coarse(const Graph& g, const Eigen::VectorXd& q_hat,
                               const Eigen::VectorXd& p_hat);

/// S(lambda) = sum_i l_i exp(lambda d_i) r_i. Throws NumericError when
/// |lambda| * max|d| exceeds 700 (the double exponent ceiling), naming the
/// offending lambda and spectral radius.
double s_value(const SpectralCoarse& c, double lambda);

/// Evaluates S on a whole grid (one exp sweep per lambda).
Eigen::VectorXd s_values(const SpectralCoarse& c, const LambdaGrid& grid);

/// Grid distance: sqrt(sum_m (S_a(lambda_m) - S_b(lambda_m))^2).
double spectral_distance(const SpectralCoarse& a, const SpectralCoarse& b,
                         const LambdaGrid& grid);

/// Same distance from precomputed S rows (used when embeddings are staged
/// through files).
double s_row_distance(const Eigen::VectorXd& sa, const Eigen::VectorXd& sb);

}  // namespace graphdm
