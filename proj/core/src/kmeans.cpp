#include "intentbench/cluster/kmeans.hpp"

#include <algorithm>
#include <limits>

#include "intentbench/error.hpp"
#include "intentbench/parallel.hpp"
#include "random.hpp"

namespace intentbench::cluster {

namespace {

void nearest_update(const RowMatrix& points, Index centroid_row, std::vector<double>& nearest) {
  for (Index i = 0; i < points.rows(); ++i) {
    const double d = (points.row(i) - points.row(centroid_row)).squaredNorm();
    nearest[static_cast<std::size_t>(i)] = std::min(nearest[static_cast<std::size_t>(i)], d);
  }
}

}  // namespace

void KMeansConfig::validate() const {
  if (max_iter < 1) throw Error(ErrorKind::Argument, "kmeans: max_iter must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::Argument, "kmeans: tol must be > 0");
  if (restarts < 1) throw Error(ErrorKind::Argument, "kmeans: restarts must be >= 1");
}

std::vector<double> kmeanspp_probabilities(const RowMatrix& points, std::span<const Index> chosen) {
  std::vector<double> weights(static_cast<std::size_t>(points.rows()),
                              std::numeric_limits<double>::infinity());
  for (Index c : chosen) nearest_update(points, c, weights);
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w = total > 0.0 ? w / total : 0.0;
  return weights;
}

CentroidSet kmeans_pp_init(const RowMatrix& points, int k, std::uint64_t seed) {
  require_k_in_range(k, points.rows(), "kmeans++");
  const auto n = static_cast<std::size_t>(points.rows());
  detail::Rng rng(seed);

  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  chosen.push_back(static_cast<Index>(rng.below(n)));
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  nearest_update(points, chosen.back(), nearest);

  while (chosen.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (double d : nearest) total += d;
    if (!(total > 0.0)) {
      throw Error(ErrorKind::Degenerate, "kmeans++: fewer than k=" + std::to_string(k) +
                                             " distinct rows");
    }
    const double target = rng.uniform() * total;
    double cumulative = 0.0;
    std::size_t pick = n;
    std::size_t last_positive = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (nearest[i] <= 0.0) continue;
      last_positive = i;
      cumulative += nearest[i];
      if (cumulative > target) {
        pick = i;
        break;
      }
    }
    if (pick == n) pick = last_positive;
    chosen.push_back(static_cast<Index>(pick));
    nearest_update(points, chosen.back(), nearest);
  }

  CentroidSet set;
  set.points.resize(k, points.cols());
  for (int c = 0; c < k; ++c) set.points.row(c) = points.row(chosen[static_cast<std::size_t>(c)]);
  return set;
}

namespace {

// Single-point transfers that lower the objective, applied until none is left.
// Moving x from A to B changes the objective by
// |B|/(|B|+1) |x - cB|^2 - |A|/(|A|-1) |x - cA|^2. Lloyd fixed points can
// still admit such moves; Hartigan fixed points are a subset of Lloyd's.
bool hartigan_moves(const RowMatrix& points, std::vector<int>& assignments, RowMatrix& centroids,
                    std::vector<std::size_t>& counts) {
  const Index n = points.rows();
  const Index k = centroids.rows();
  const double scale = within_cluster_sum_of_squares(points, assignments, centroids);
  bool any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (Index i = 0; i < n; ++i) {
      const auto from = static_cast<Index>(assignments[static_cast<std::size_t>(i)]);
      const double n_from = static_cast<double>(counts[static_cast<std::size_t>(from)]);
      if (n_from < 2) continue;
      const double removal = n_from / (n_from - 1.0) * (points.row(i) - centroids.row(from)).squaredNorm();
      Index best = from;
      double best_gain = 1e-12 * scale;
      for (Index c = 0; c < k; ++c) {
        if (c == from) continue;
        const double n_to = static_cast<double>(counts[static_cast<std::size_t>(c)]);
        const double gain = removal - n_to / (n_to + 1.0) * (points.row(i) - centroids.row(c)).squaredNorm();
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      if (best == from) continue;
      const double n_to = static_cast<double>(counts[static_cast<std::size_t>(best)]);
      centroids.row(from) = (centroids.row(from) * n_from - points.row(i)) / (n_from - 1.0);
      centroids.row(best) = (centroids.row(best) * n_to + points.row(i)) / (n_to + 1.0);
      --counts[static_cast<std::size_t>(from)];
      ++counts[static_cast<std::size_t>(best)];
      assignments[static_cast<std::size_t>(i)] = static_cast<int>(best);
      moved = any = true;
    }
  }
  // Exact means; the running updates above drift.
  if (any) centroids = compute_barycenters(points, assignments, static_cast<int>(k));
  return any;
}

}  // namespace

LloydRun lloyd(const RowMatrix& points, const CentroidSet& init, const KMeansConfig& config) {
  config.validate();
  const Index n = points.rows();
  const Index k = init.points.rows();
  if (k < 1 || k > n || init.points.cols() != points.cols()) {
    throw Error(ErrorKind::Argument, "lloyd: initial centroids do not fit the data");
  }

  LloydRun run;
  run.centroids = init.points;
  run.assignments.assign(static_cast<std::size_t>(n), 0);
  std::vector<double> cost(static_cast<std::size_t>(n), 0.0);
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    // Assignment: nearest centroid, lowest index on ties. Candidates are
    // ranked by |c|^2 - 2 x.c from one matrix product; the chosen distance
    // is then computed exactly.
    std::fill(counts.begin(), counts.end(), 0);
    const RowMatrix cross = points * run.centroids.transpose();
    const Eigen::VectorXd centroid_norms = run.centroids.rowwise().squaredNorm();
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_key = centroid_norms(0) - 2.0 * cross(i, 0);
      for (Index c = 1; c < k; ++c) {
        const double key = centroid_norms(c) - 2.0 * cross(i, c);
        if (key < best_key) {
          best_key = key;
          best = c;
        }
      }
      run.assignments[static_cast<std::size_t>(i)] = static_cast<int>(best);
      cost[static_cast<std::size_t>(i)] = (points.row(i) - run.centroids.row(best)).squaredNorm();
      ++counts[static_cast<std::size_t>(best)];
    }

    // An empty cluster takes over the point farthest from its own centroid.
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      std::size_t donor = static_cast<std::size_t>(n);
      double farthest = 0.0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        if (counts[static_cast<std::size_t>(run.assignments[i])] < 2) continue;
        if (cost[i] > farthest) {
          farthest = cost[i];
          donor = i;
        }
      }
      if (donor == static_cast<std::size_t>(n)) {
        throw Error(ErrorKind::Degenerate, "kmeans: cannot repopulate an empty cluster");
      }
      --counts[static_cast<std::size_t>(run.assignments[donor])];
      run.assignments[donor] = static_cast<int>(c);
      counts[static_cast<std::size_t>(c)] = 1;
      cost[donor] = 0.0;
      run.centroids.row(c) = points.row(static_cast<Index>(donor));
    }

    double objective = 0.0;
    for (double d : cost) objective += d;
    run.objective_trace.push_back(objective);

    // Update: centroids move to cluster means.
    RowMatrix updated = compute_barycenters(points, run.assignments, static_cast<int>(k));
    double shift = 0.0;
    for (Index c = 0; c < k; ++c) shift = std::max(shift, (updated.row(c) - run.centroids.row(c)).norm());
    run.centroids = std::move(updated);

    run.objective = within_cluster_sum_of_squares(points, run.assignments, run.centroids);
    run.objective_trace.push_back(run.objective);
    run.iterations = iter;
    if (shift < config.tol) {
      if (!hartigan_moves(points, run.assignments, run.centroids, counts)) {
        run.converged = true;
        break;
      }
      run.objective = within_cluster_sum_of_squares(points, run.assignments, run.centroids);
      run.objective_trace.push_back(run.objective);
    }
  }
  return run;
}

ClusterResult kmeans(const RowMatrix& points, int k, const KMeansConfig& config) {
  config.validate();
  require_k_in_range(k, points.rows(), "kmeans");

  std::vector<LloydRun> runs(static_cast<std::size_t>(config.restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    const auto init = kmeans_pp_init(points, k, detail::derive_seed(config.seed, r));
    runs[r] = lloyd(points, init, config);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].objective < runs[best].objective) best = r;
  }

  ClusterResult result;
  result.assignments = std::move(runs[best].assignments);
  result.k = k;
  result.barycenters = std::move(runs[best].centroids);
  result.algorithm = "kmeans";
  result.seed = config.seed;
  if (!runs[best].converged) {
    result.warnings.push_back("kmeans: best restart hit max_iter=" + std::to_string(config.max_iter));
  }
  canonicalize_labels(result);
  return result;
}

double kmeans_objective(const RowMatrix& points, const ClusterResult& result) {
  if (result.barycenters) {
    return within_cluster_sum_of_squares(points, result.assignments, *result.barycenters);
  }
  return within_cluster_sum_of_squares(points, result.assignments,
                                       compute_barycenters(points, result.assignments, result.k));
}

}  // namespace intentbench::cluster
