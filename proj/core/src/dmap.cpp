#include "graphdm/dmap.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "graphdm/error.hpp"

namespace graphdm {

std::string_view metric_name(Metric m) {
  return m == Metric::kSubgraph ? "subgraph" : "spectral";
}

Metric metric_from_name(std::string_view name) {
  if (name == "subgraph") return Metric::kSubgraph;
  if (name == "spectral") return Metric::kSpectral;
  throw ParameterError("unknown metric: " + std::string(name) +
                       " (expected subgraph or spectral)");
}

void validate_distances(const DistanceMatrix& dm) {
  const auto& d = dm.d;
  if (d.rows() != d.cols())
    throw DataError("distance matrix must be square");
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (d(i, i) != 0.0)
      throw DataError("distance matrix diagonal must be zero");
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      if (!(d(i, j) >= 0.0))
        throw DataError("distance matrix entries must be nonnegative");
      if (std::abs(d(i, j) - d(j, i)) > 1e-12)
        throw DataError("distance matrix must be symmetric within 1e-12");
    }
  }
}

DistanceMatrix pairwise_distances(const std::vector<DensityVector>& rho) {
  const int m = static_cast<int>(rho.size());
  DistanceMatrix out;
  out.metric.metric = Metric::kSubgraph;
  out.d = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double dist = subgraph_distance(rho[i], rho[j]);
      out.d(i, j) = dist;
      out.d(j, i) = dist;
    }
  }
  return out;
}

DistanceMatrix pairwise_distances(const std::vector<SpectralCoarse>& emb,
                                  const LambdaGrid& grid) {
  validate_grid(grid);
  const int m = static_cast<int>(emb.size());
  // Evaluate each graph's S row once; pair distances are then plain L2.
  std::vector<Eigen::VectorXd> rows(m);
  for (int i = 0; i < m; ++i) rows[i] = s_values(emb[i], grid);

  DistanceMatrix out;
  out.metric.metric = Metric::kSpectral;
  out.metric.grid = grid;
  out.d = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double dist = (rows[i] - rows[j]).norm();
      out.d(i, j) = dist;
      out.d(j, i) = dist;
    }
  }
  return out;
}

DistanceMatrix pairwise_distances(const std::vector<GraphRecord>& records,
                                  const MetricConfig& metric) {
  common_node_count(records, 2);
  if (metric.metric == Metric::kSubgraph) {
    std::vector<DensityVector> rho;
    rho.reserve(records.size());
    for (const auto& rec : records) rho.push_back(census_fast(rec.graph));
    return pairwise_distances(rho);
  }
  std::vector<SpectralCoarse> emb;
  emb.reserve(records.size());
  for (const auto& rec : records) emb.push_back(spectral_coarse(rec.graph));
  return pairwise_distances(emb, metric.grid);
}

double median_epsilon(const DistanceMatrix& dm) {
  const int m = dm.size();
  if (m < 2) throw DataError("median_epsilon: need at least two points");
  std::vector<double> offdiag;
  offdiag.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) offdiag.push_back(dm.d(i, j));
  auto mid = offdiag.begin() + offdiag.size() / 2;
  std::nth_element(offdiag.begin(), mid, offdiag.end());
  double med = *mid;
  if (offdiag.size() % 2 == 0) {
    auto lo = std::max_element(offdiag.begin(), mid);
    med = (med + *lo) / 2.0;
  }
  if (med <= 0.0)
    throw DataError("median_epsilon: median off-diagonal distance is zero");
  return med;
}

Eigen::MatrixXd gaussian_kernel(const DistanceMatrix& dm, double epsilon) {
  if (!(epsilon > 0.0))
    throw ParameterError("gaussian_kernel: epsilon must be positive");
  return (-dm.d.array().square() / (epsilon * epsilon)).exp();
}

MarkovResult markov_normalize(const Eigen::MatrixXd& w) {
  MarkovResult out;
  out.row_sums = w.rowwise().sum();
  out.a = out.row_sums.cwiseInverse().asDiagonal() * w;
  return out;
}

DiffusionMapModel dmap_eigs(const Eigen::MatrixXd& w, double epsilon,
                            const MetricConfig& metric, int k) {
  const int m = static_cast<int>(w.rows());
  if (k < 1 || k > m)
    throw ParameterError("dmap_eigs: k must lie in [1, point count]");

  const Eigen::VectorXd row_sums = w.rowwise().sum();
  const Eigen::VectorXd d_isqrt = row_sums.cwiseSqrt().cwiseInverse();
  // Symmetric conjugate S = D^-1/2 W D^-1/2 shares the spectrum of
  // A = D^-1 W; its eigenvectors map back through D^-1/2.
  const Eigen::MatrixXd sym =
      d_isqrt.asDiagonal() * w * d_isqrt.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericError("dmap_eigs: eigensolver failed to converge");

  DiffusionMapModel model;
  model.epsilon = epsilon;
  model.metric = metric;
  model.row_sums = row_sums;
  model.eigenvalues.resize(k);
  model.coords.resize(m, k);
  for (int j = 0; j < k; ++j) {
    model.eigenvalues[j] = solver.eigenvalues()[m - 1 - j];
    Eigen::VectorXd phi =
        d_isqrt.asDiagonal() * solver.eigenvectors().col(m - 1 - j);
    phi.normalize();
    for (int i = 0; i < m; ++i) {
      if (phi[i] != 0.0) {
        if (phi[i] < 0.0) phi = -phi;
        break;
      }
    }
    model.coords.col(j) = phi;
  }
  return model;
}

DiffusionMapModel fit_dmap(const DistanceMatrix& dm, double epsilon, int k) {
  const Eigen::MatrixXd w = gaussian_kernel(dm, epsilon);
  DiffusionMapModel model = dmap_eigs(w, epsilon, dm.metric, k);
  return model;
}

Eigen::VectorXd nystrom_extend(const DiffusionMapModel& model,
                               const Eigen::VectorXd& d_new,
                               bool skip_degenerate) {
  if (d_new.size() != model.point_count())
    throw ParameterError("nystrom_extend: distance vector length " +
                         std::to_string(d_new.size()) +
                         " does not match reference size " +
                         std::to_string(model.point_count()));
  const Eigen::ArrayXd w_new =
      (-(d_new.array() / model.epsilon).square()).exp();
  const double total = w_new.sum();
  const Eigen::VectorXd k_new = (w_new / total).matrix();

  Eigen::VectorXd phi_new(model.eig_count());
  for (int j = 0; j < model.eig_count(); ++j) {
    const double lambda = model.eigenvalues[j];
    if (std::abs(lambda) < 1e-12) {
      if (skip_degenerate) {
        phi_new[j] = 0.0;
        continue;
      }
      throw NumericError(
          "nystrom_extend: eigenvalue " + std::to_string(j + 1) +
          " is below 1e-12; extension along it is degenerate");
    }
    phi_new[j] = k_new.dot(model.coords.col(j)) / lambda;
  }
  return phi_new;
}

double harmonic_r2(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   int degree) {
  if (degree < 1) throw ParameterError("harmonic_r2: degree must be >= 1");
  if (x.size() != y.size() || x.size() < degree + 1)
    throw ParameterError("harmonic_r2: need more points than coefficients");
  const int m = static_cast<int>(x.size());

  // Map x to [-1, 1] before building the Vandermonde matrix; anything else
  // is hopeless conditioning-wise at degree 5.
  const double lo = x.minCoeff(), hi = x.maxCoeff();
  if (hi <= lo) throw ParameterError("harmonic_r2: x is constant");
  Eigen::MatrixXd v(m, degree + 1);
  for (int i = 0; i < m; ++i) {
    const double t = 2.0 * (x[i] - lo) / (hi - lo) - 1.0;
    double pw = 1.0;
    for (int c = 0; c <= degree; ++c) {
      v(i, c) = pw;
      pw *= t;
    }
  }
  const Eigen::VectorXd coef =
      v.colPivHouseholderQr().solve(y);
  const double ss_res = (y - v * coef).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  if (ss_tot == 0.0) return 1.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace graphdm
