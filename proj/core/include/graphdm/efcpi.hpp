#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "graphdm/dmap.hpp"

namespace graphdm {

/// Convex hull of 2-d points (counterclockwise polygon). Used to warn when
/// a projective step leaves the region the reference data covers.
struct ConvexHull2D {
  std::vector<Eigen::Vector2d> polygon;

  /// True when p is inside or on the hull (tolerance on the boundary test).
  bool contains(const Eigen::Vector2d& p, double tol = 1e-12) const;
};

ConvexHull2D convex_hull(const std::vector<Eigen::Vector2d>& points);

/// Everything lifting and restriction need: the reference snapshots, their
/// diffusion-map model, per-graph metric embeddings (so distances to any new
/// graph are computable without touching the original pipeline), and the
/// eigenvector pair that parametrizes the slow manifold.
struct ReferenceDataset {
  std::vector<GraphRecord> records;  // sorted by id, aligned with model rows
  DiffusionMapModel model;
  std::vector<DensityVector> density;    // subgraph metric cache
  Eigen::MatrixXd s_rows;                // spectral metric cache (m x grid)
  std::pair<int, int> coord_pair{1, 2};  // model column indices (phi2, phi3)
  ConvexHull2D hull;                     // hull of the pair coordinates

  int size() const { return static_cast<int>(records.size()); }
  Eigen::Vector2d pair_coords(int i) const {
    return {model.coords(i, coord_pair.first),
            model.coords(i, coord_pair.second)};
  }
  /// Per-coordinate spread (max - min) of the pair coordinates.
  Eigen::Vector2d coord_range() const;
  /// Metric distances from g to every reference snapshot.
  Eigen::VectorXd distances_to(const Graph& g) const;
};

/// Runs the diffusion-map pipeline over the snapshots and caches what the
/// equation-free operators need. epsilon <= 0 selects the median heuristic.
/// Records are re-sorted by id so the result is independent of input order.
ReferenceDataset build_reference(std::vector<GraphRecord> snapshots,
                                 const MetricConfig& metric, double epsilon,
                                 int k, std::pair<int, int> coord_pair = {1, 2});

/// Rebuilds the caches around an existing model (the staged-file path).
/// The model row count must match the record count.
ReferenceDataset make_reference(std::vector<GraphRecord> records,
                                DiffusionMapModel model,
                                std::pair<int, int> coord_pair = {1, 2});

/// Lifting: a coarse coordinate becomes a weighted ensemble of reference
/// graphs. members are the N nearest reference points in the pair
/// coordinates; coeffs is the minimum-norm solution of
/// sum_i c_i phi_ref(G_i) = phi0 (SVD pseudoinverse of the 2 x N system).
struct LiftedEnsemble {
  Eigen::Vector2d target;
  std::vector<int> members;  // indices into the reference dataset
  Eigen::VectorXd coeffs;
  double residual = 0.0;  // ||sum_i c_i phi_ref(G_i) - phi0||
  int rank = 0;           // numerical rank of the neighbor coordinate matrix
};

/// N > 2 required. Rank-deficient neighborhoods (collinear coordinates) are
/// still solved (least squares, minimum norm) and reported through `rank`.
LiftedEnsemble lift(const Eigen::Vector2d& phi0, const ReferenceDataset& ref,
                    int n_neighbors);

/// Nystrom coordinates of one graph in the reference pair.
Eigen::Vector2d nystrom_pair(const ReferenceDataset& ref, const Graph& g);

/// Restriction: coefficient-weighted sum of the graphs' Nystrom coordinates.
Eigen::Vector2d restrict_ensemble(const std::vector<double>& coeffs,
                                  const std::vector<Graph>& graphs,
                                  const ReferenceDataset& ref);

/// Restriction of a lifted ensemble in its un-evolved state.
Eigen::Vector2d restrict_ensemble(const LiftedEnsemble& ens,
                                  const ReferenceDataset& ref);

struct CpiConfig {
  int t_burst = 10;            // burst length, timesteps
  int t_project = 10;          // projection length, timesteps
  int steps_per_timestep = 10; // rule iterations per timestep
  int k_runs = 1;              // replicas averaged per burst
  int n_neighbors = 10;        // ensemble size N (> 2)
  int coarse_steps = 1;        // CPI iterations
  double r_remove = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One row of the coarse trajectory. phi is the coarse coordinate after the
/// step (post-projection); the histogram and edge count summarize the
/// ensemble at the end of the step's burst (step 0 carries the initial
/// graph's). fine_steps_used counts rule iterations along the coarse time
/// axis, i.e. what a single fine-grained trajectory would have to run.
struct CpiStep {
  int step = 0;
  std::int64_t fine_steps_used = 0;
  Eigen::Vector2d phi;
  double mean_edges = 0.0;
  std::vector<double> degree_hist;  // normalized, length n
  // lift diagnostics
  double lift_residual = 0.0;
  int lift_rank = 2;
  double coeff_min = 0.0, coeff_max = 0.0, coeff_sum = 0.0;
  bool in_hull = true;
};

/// Coarse projective integration. Each coarse step is
///   lift -> evolve burst (k_runs replicas, split rng streams) -> restrict
///   -> Euler projection  phi <- phi(t_burst) + t_project * slope,
/// slope being the replica-mean chord (phi(t_burst) - phi(0)) / t_burst.
/// The burst is exactly restrict(evolve(lift(phi))): member m of replica r
/// in coarse step s evolves under Rng(Rng::derive(seed, {s, r, m})), which
/// makes runs reproducible and the t_project = 0 limit bit-identical to
/// repeated lift/evolve/restrict.
/// Projections landing outside the reference hull are recorded as warnings
/// (in_hull = false), never failures.
std::vector<CpiStep> cpi_run(const Graph& g0, const CpiConfig& cfg,
                             const ReferenceDataset& ref);

/// Local linear map estimates: for each datapoint, the 2x2 slope matrix of
/// an affine least-squares fit of targets on coords over the point and its
/// k_nn nearest neighbors in coord space. Rank-deficient neighborhoods are
/// flagged and excluded from the sign statistic.
struct JacobianEstimate {
  Eigen::Matrix2d jac;
  double det = 0.0;
  bool flagged = false;
  int neighborhood = 0;
};

struct JacobianField {
  std::vector<JacobianEstimate> points;

  /// Fraction of non-flagged points whose determinant carries the majority
  /// sign. 1.0 means the fitted map is orientation-consistent everywhere.
  double sign_constancy() const;
};

JacobianField jacobian_field(const Eigen::MatrixXd& coords,
                             const Eigen::MatrixXd& targets, int k_nn);

}  // namespace graphdm
