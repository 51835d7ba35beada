#include "graphdm/spectral.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "graphdm/error.hpp"

namespace graphdm {

void validate_grid(const LambdaGrid& grid) {
  if (grid.lambdas.empty())
    throw ParameterError("lambda grid must hold at least one value");
  double prev = -std::numeric_limits<double>::infinity();
  for (double x : grid.lambdas) {
    if (!std::isfinite(x))
      throw ParameterError("lambda grid values must be finite");
    if (!(x > prev))
      throw ParameterError("lambda grid must be strictly increasing");
    prev = x;
  }
}

LambdaGrid default_lambda_grid(int n, int count) {
  if (n < 2) throw ParameterError("default_lambda_grid: need n >= 2");
  if (count < 1) throw ParameterError("default_lambda_grid: need count >= 1");
  const double top = 5.0 / (n - 1);
  LambdaGrid grid;
  grid.lambdas.resize(count);
  for (int j = 0; j < count; ++j)
    grid.lambdas[j] = top * static_cast<double>(j + 1) / count;
  return grid;
}

namespace {

SpectralCoarse decompose(const Graph& g, const Eigen::VectorXd& q_hat,
                         const Eigen::VectorXd& p_hat, bool same_weights) {
  const int n = g.node_count();
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v] : g.edges()) {
    adj(u, v) = 1.0;
    adj(v, u) = 1.0;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adj);
  if (solver.info() != Eigen::Success)
    throw NumericError("spectral_coarse: adjacency eigensolver failed");

  // Eigen sorts ascending; flip to descending.
  SpectralCoarse out;
  out.d = solver.eigenvalues().reverse();
  const Eigen::MatrixXd vecs = solver.eigenvectors().rowwise().reverse();
  out.l = vecs.transpose() * q_hat;
  out.r = same_weights ? out.l : vecs.transpose() * p_hat;
  return out;
}

}  // namespace

SpectralCoarse spectral_coarse(const Graph& g) {
  const Eigen::VectorXd uniform =
      Eigen::VectorXd::Constant(g.node_count(), 1.0 / g.node_count());
  // p_hat == q_hat, so l and r stay bit-identical
  return decompose(g, uniform, uniform, true);
}

SpectralCoarse spectral_coarse(const Graph& g, const Eigen::VectorXd& q_hat,
                               const Eigen::VectorXd& p_hat) {
  if (q_hat.size() != g.node_count() || p_hat.size() != g.node_count())
    throw ParameterError("spectral_coarse: weight vectors must have length n");
  return decompose(g, q_hat, p_hat, false);
}

double s_value(const SpectralCoarse& c, double lambda) {
  const double radius = c.d.size() ? c.d.cwiseAbs().maxCoeff() : 0.0;
  if (std::abs(lambda) * radius > 700.0)
    throw NumericError("s_value: lambda " + std::to_string(lambda) +
                       " with spectral radius " + std::to_string(radius) +
                       " exceeds the exp overflow guard (|lambda|*radius > 700)");
  double sum = 0.0;
  for (int i = 0; i < c.d.size(); ++i)
    sum += c.l[i] * std::exp(lambda * c.d[i]) * c.r[i];
  return sum;
}

Eigen::VectorXd s_values(const SpectralCoarse& c, const LambdaGrid& grid) {
  Eigen::VectorXd out(grid.size());
  for (int j = 0; j < grid.size(); ++j) out[j] = s_value(c, grid.lambdas[j]);
  return out;
}

double spectral_distance(const SpectralCoarse& a, const SpectralCoarse& b,
                         const LambdaGrid& grid) {
  double sum = 0.0;
  for (double lambda : grid.lambdas) {
    const double diff = s_value(a, lambda) - s_value(b, lambda);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double s_row_distance(const Eigen::VectorXd& sa, const Eigen::VectorXd& sb) {
  if (sa.size() != sb.size())
    throw ParameterError("s_row_distance: rows evaluated on different grids");
  return (sa - sb).norm();
}

}  // namespace graphdm
