#include "graphdm/efcpi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "graphdm/error.hpp"
#include "graphdm/evolve.hpp"

namespace graphdm {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a,
             const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) -
         (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

ConvexHull2D convex_hull(const std::vector<Eigen::Vector2d>& points) {
  std::vector<Eigen::Vector2d> pts = points;
  std::sort(pts.begin(), pts.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
            });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                          return a.x() == b.x() && a.y() == b.y();
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return {pts};

  // Andrew's monotone chain.
  std::vector<Eigen::Vector2d> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return {hull};
}

bool ConvexHull2D::contains(const Eigen::Vector2d& p, double tol) const {
  if (polygon.empty()) return false;
  if (polygon.size() == 1) return (p - polygon[0]).norm() <= tol;
  if (polygon.size() == 2) {
    const Eigen::Vector2d d = polygon[1] - polygon[0];
    const double t = d.dot(p - polygon[0]) / d.squaredNorm();
    const Eigen::Vector2d proj = polygon[0] + std::clamp(t, 0.0, 1.0) * d;
    return (p - proj).norm() <= tol;
  }
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    if (cross(a, b, p) < -tol) return false;
  }
  return true;
}

Eigen::Vector2d ReferenceDataset::coord_range() const {
  Eigen::Vector2d lo(std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (int i = 0; i < size(); ++i) {
    const Eigen::Vector2d c = pair_coords(i);
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  return hi - lo;
}

Eigen::VectorXd ReferenceDataset::distances_to(const Graph& g) const {
  Eigen::VectorXd d(size());
  if (model.metric.metric == Metric::kSubgraph) {
    const DensityVector rho = census_fast(g);
    for (int i = 0; i < size(); ++i)
      d[i] = subgraph_distance(rho, density[i]);
  } else {
    const Eigen::VectorXd row =
        s_values(spectral_coarse(g), model.metric.grid);
    for (int i = 0; i < size(); ++i)
      d[i] = (row - s_rows.row(i).transpose()).norm();
  }
  return d;
}

namespace {

void fill_caches(ReferenceDataset& ref) {
  const int m = ref.size();
  if (ref.model.metric.metric == Metric::kSubgraph) {
    ref.density.resize(m);
    for (int i = 0; i < m; ++i)
      ref.density[i] = census_fast(ref.records[i].graph);
  } else {
    validate_grid(ref.model.metric.grid);
    ref.s_rows.resize(m, ref.model.metric.grid.size());
    for (int i = 0; i < m; ++i)
      ref.s_rows.row(i) =
          s_values(spectral_coarse(ref.records[i].graph),
                   ref.model.metric.grid)
              .transpose();
  }
  std::vector<Eigen::Vector2d> pts(m);
  for (int i = 0; i < m; ++i) pts[i] = ref.pair_coords(i);
  ref.hull = convex_hull(pts);
}

void check_pair(const DiffusionMapModel& model, std::pair<int, int> pair) {
  const int k = model.eig_count();
  if (pair.first < 0 || pair.second < 0 || pair.first >= k ||
      pair.second >= k || pair.first == pair.second)
    throw ParameterError("reference coordinate pair out of range");
}

}  // namespace

ReferenceDataset build_reference(std::vector<GraphRecord> snapshots,
                                 const MetricConfig& metric, double epsilon,
                                 int k, std::pair<int, int> coord_pair) {
  sort_by_id(snapshots);
  common_node_count(snapshots, 4);
  const DistanceMatrix dm = pairwise_distances(snapshots, metric);
  const double eps = epsilon > 0.0 ? epsilon : median_epsilon(dm);

  ReferenceDataset ref;
  ref.records = std::move(snapshots);
  ref.model = fit_dmap(dm, eps, k);
  check_pair(ref.model, coord_pair);
  ref.coord_pair = coord_pair;
  fill_caches(ref);
  return ref;
}

ReferenceDataset make_reference(std::vector<GraphRecord> records,
                                DiffusionMapModel model,
                                std::pair<int, int> coord_pair) {
  sort_by_id(records);
  if (model.point_count() != static_cast<int>(records.size()))
    throw DataError("make_reference: model has " +
                    std::to_string(model.point_count()) +
                    " rows but the dataset has " +
                    std::to_string(records.size()) + " records");
  check_pair(model, coord_pair);
  ReferenceDataset ref;
  ref.records = std::move(records);
  ref.model = std::move(model);
  ref.coord_pair = coord_pair;
  fill_caches(ref);
  return ref;
}

LiftedEnsemble lift(const Eigen::Vector2d& phi0, const ReferenceDataset& ref,
                    int n_neighbors) {
  if (n_neighbors <= 2)
    throw ParameterError("lift: need more than two neighbors");
  if (n_neighbors > ref.size())
    throw ParameterError("lift: fewer reference points than neighbors");
  if (!phi0.allFinite())
    throw ParameterError("lift: target coordinate is not finite");

  // N nearest reference points in the pair coordinates; ties by index.
  std::vector<int> order(ref.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(ref.size());
  for (int i = 0; i < ref.size(); ++i)
    dist[i] = (ref.pair_coords(i) - phi0).squaredNorm();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist[a] < dist[b]; });
  order.resize(n_neighbors);

  Eigen::MatrixXd coords(2, n_neighbors);
  for (int j = 0; j < n_neighbors; ++j)
    coords.col(j) = ref.pair_coords(order[j]);

  // Minimum-norm solution of the underdetermined 2 x N system.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      coords, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  LiftedEnsemble ens;
  ens.target = phi0;
  ens.members = std::move(order);
  ens.coeffs = svd.solve(phi0);
  ens.rank = static_cast<int>(svd.rank());
  ens.residual = (coords * ens.coeffs - phi0).norm();
  return ens;
}

Eigen::Vector2d nystrom_pair(const ReferenceDataset& ref, const Graph& g) {
  const Eigen::VectorXd phi = nystrom_extend(ref.model, ref.distances_to(g));
  return {phi[ref.coord_pair.first], phi[ref.coord_pair.second]};
}

Eigen::Vector2d restrict_ensemble(const std::vector<double>& coeffs,
                                  const std::vector<Graph>& graphs,
                                  const ReferenceDataset& ref) {
  if (coeffs.size() != graphs.size())
    throw ParameterError("restrict_ensemble: coefficient/graph count mismatch");
  for (double c : coeffs)
    if (!std::isfinite(c))
      throw ParameterError("restrict_ensemble: non-finite coefficient");
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < graphs.size(); ++i)
    out += coeffs[i] * nystrom_pair(ref, graphs[i]);
  return out;
}

Eigen::Vector2d restrict_ensemble(const LiftedEnsemble& ens,
                                  const ReferenceDataset& ref) {
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int j = 0; j < static_cast<int>(ens.members.size()); ++j)
    out += ens.coeffs[j] * ref.pair_coords(ens.members[j]);
  return out;
}

void CpiConfig::validate() const {
  if (t_burst < 1) throw ParameterError("cpi: t_burst must be >= 1");
  if (t_project < 0) throw ParameterError("cpi: t_project must be >= 0");
  if (steps_per_timestep < 1)
    throw ParameterError("cpi: steps_per_timestep must be >= 1");
  if (k_runs < 1) throw ParameterError("cpi: k_runs must be >= 1");
  if (n_neighbors <= 2) throw ParameterError("cpi: n_neighbors must be > 2");
  if (coarse_steps < 0) throw ParameterError("cpi: coarse_steps must be >= 0");
  if (!(r_remove >= 0.0 && r_remove <= 1.0))
    throw ParameterError("cpi: r_remove must lie in [0, 1]");
}

namespace {

void summarize_graphs(const std::vector<Graph>& graphs, CpiStep& step) {
  const int n = graphs.front().node_count();
  std::vector<double> hist(static_cast<std::size_t>(n), 0.0);
  double edges = 0.0;
  for (const auto& g : graphs) {
    edges += g.edge_count();
    const auto h = degree_histogram(g).normalized();
    for (int d = 0; d < n; ++d) hist[d] += h[d];
  }
  const double inv = 1.0 / static_cast<double>(graphs.size());
  for (double& x : hist) x *= inv;
  step.mean_edges = edges * inv;
  step.degree_hist = std::move(hist);
}

}  // namespace

std::vector<CpiStep> cpi_run(const Graph& g0, const CpiConfig& cfg,
                             const ReferenceDataset& ref) {
  cfg.validate();
  const int n_ref = common_node_count(ref.records);
  if (g0.node_count() != n_ref)
    throw DataError("cpi_run: initial graph has " +
                    std::to_string(g0.node_count()) +
                    " nodes, reference has " + std::to_string(n_ref));

  std::vector<CpiStep> trajectory;
  trajectory.reserve(cfg.coarse_steps + 1);

  CpiStep initial;
  initial.step = 0;
  initial.fine_steps_used = 0;
  initial.phi = nystrom_pair(ref, g0);
  summarize_graphs({g0}, initial);
  initial.in_hull = ref.hull.contains(initial.phi, 1e-9);
  trajectory.push_back(initial);

  const std::int64_t burst_iterations =
      static_cast<std::int64_t>(cfg.t_burst) * cfg.steps_per_timestep;
  Eigen::Vector2d phi = initial.phi;
  std::int64_t budget = 0;

  for (int step = 1; step <= cfg.coarse_steps; ++step) {
    const LiftedEnsemble ens = lift(phi, ref, cfg.n_neighbors);
    const std::vector<double> coeffs(ens.coeffs.data(),
                                     ens.coeffs.data() + ens.coeffs.size());
    std::vector<Graph> members;
    members.reserve(ens.members.size());
    for (int idx : ens.members) members.push_back(ref.records[idx].graph);

    const Eigen::Vector2d phi_start = restrict_ensemble(coeffs, members, ref);

    Eigen::Vector2d phi_end_mean = Eigen::Vector2d::Zero();
    std::vector<Graph> evolved_all;
    evolved_all.reserve(members.size() * cfg.k_runs);
    for (int rep = 0; rep < cfg.k_runs; ++rep) {
      std::vector<Graph> evolved;
      evolved.reserve(members.size());
      for (std::size_t mi = 0; mi < members.size(); ++mi) {
        Rng stream(Rng::derive(cfg.seed,
                               {static_cast<std::uint64_t>(step),
                                static_cast<std::uint64_t>(rep),
                                static_cast<std::uint64_t>(mi)}));
        evolved.push_back(
            evolve_many(members[mi], burst_iterations, cfg.r_remove, stream));
      }
      phi_end_mean += restrict_ensemble(coeffs, evolved, ref);
      for (auto& g : evolved) evolved_all.push_back(std::move(g));
    }
    phi_end_mean /= static_cast<double>(cfg.k_runs);

    // Replica-mean chord per timestep, then Euler from the burst end.
    const Eigen::Vector2d slope = (phi_end_mean - phi_start) / cfg.t_burst;
    phi = phi_end_mean + static_cast<double>(cfg.t_project) * slope;
    budget += burst_iterations;

    CpiStep rec;
    rec.step = step;
    rec.fine_steps_used = budget;
    rec.phi = phi;
    summarize_graphs(evolved_all, rec);
    rec.lift_residual = ens.residual;
    rec.lift_rank = ens.rank;
    rec.coeff_min = ens.coeffs.minCoeff();
    rec.coeff_max = ens.coeffs.maxCoeff();
    rec.coeff_sum = ens.coeffs.sum();
    rec.in_hull = ref.hull.contains(phi, 1e-9);
    trajectory.push_back(std::move(rec));
  }
  return trajectory;
}

double JacobianField::sign_constancy() const {
  std::int64_t pos = 0, neg = 0;
  for (const auto& p : points) {
    if (p.flagged) continue;
    if (p.det > 0.0)
      ++pos;
    else if (p.det < 0.0)
      ++neg;
  }
  const std::int64_t total = pos + neg;
  if (total == 0) return 0.0;
  return static_cast<double>(std::max(pos, neg)) /
         static_cast<double>(total);
}

JacobianField jacobian_field(const Eigen::MatrixXd& coords,
                             const Eigen::MatrixXd& targets, int k_nn) {
  const int m = static_cast<int>(coords.rows());
  if (coords.cols() != 2 || targets.cols() != 2)
    throw ParameterError("jacobian_field: coords and targets must be m x 2");
  if (targets.rows() != m)
    throw ParameterError("jacobian_field: coords/targets row mismatch");
  if (k_nn < 4) throw ParameterError("jacobian_field: k_nn must be >= 4");
  if (m <= k_nn)
    throw ParameterError("jacobian_field: need more points than k_nn");

  JacobianField field;
  field.points.resize(m);
  std::vector<int> order(m);
  std::vector<double> dist(m);
  for (int i = 0; i < m; ++i) {
    std::iota(order.begin(), order.end(), 0);
    for (int j = 0; j < m; ++j)
      dist[j] = (coords.row(j) - coords.row(i)).squaredNorm();
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return dist[a] < dist[b]; });
    // The point itself (distance 0) plus its k_nn nearest neighbors.
    const int count = k_nn + 1;

    Eigen::MatrixXd design(count, 3);
    Eigen::MatrixXd rhs(count, 2);
    for (int r = 0; r < count; ++r) {
      const int idx = order[r];
      design(r, 0) = 1.0;
      design(r, 1) = coords(idx, 0);
      design(r, 2) = coords(idx, 1);
      rhs.row(r) = targets.row(idx);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    JacobianEstimate& est = field.points[i];
    est.neighborhood = count;
    if (svd.rank() < 3) {
      est.flagged = true;
      est.jac.setZero();
      est.det = 0.0;
      continue;
    }
    const Eigen::MatrixXd sol = svd.solve(rhs);  // 3 x 2, rows: const, a, b
    est.jac << sol(1, 0), sol(2, 0), sol(1, 1), sol(2, 1);
    est.det = est.jac.determinant();
  }
  return field;
}

}  // namespace graphdm
