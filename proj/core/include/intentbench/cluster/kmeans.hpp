#pragma once

#include <cstdint>
#include <vector>

#include "intentbench/cluster/result.hpp"
#include "intentbench/matrix.hpp"

namespace intentbench::cluster {

struct KMeansConfig {
  int max_iter = 300;
  /// Lloyd iterations stop once no centroid moves farther than this.
  double tol = 1e-6;
  int restarts = 10;
  std::uint64_t seed = 42;

  void validate() const;
};

struct CentroidSet {
  RowMatrix points;
};

/// Probability of each row being drawn as the next K-means++ centroid given
/// the rows already chosen: squared distance to the nearest chosen row,
/// normalized. All zeros when every row coincides with a chosen one.
std::vector<double> kmeanspp_probabilities(const RowMatrix& points, std::span<const Index> chosen);

/// K-means++ seeding: first row uniform, later rows drawn by squared distance
/// to the nearest chosen centroid. Deterministic in `seed`.
CentroidSet kmeans_pp_init(const RowMatrix& points, int k, std::uint64_t seed);

/// One Lloyd descent from fixed initial centroids. When the centroids settle,
/// single points are transferred between clusters while that lowers the
/// objective, and Lloyd resumes if any point moved.
struct LloydRun {
  std::vector<int> assignments;
  RowMatrix centroids;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Objective after every assignment step, centroid update and transfer pass, in order.
  std::vector<double> objective_trace;
};

LloydRun lloyd(const RowMatrix& points, const CentroidSet& init, const KMeansConfig& config);

/// Best of `config.restarts` K-means++ seeded Lloyd runs. Barycenters are set.
ClusterResult kmeans(const RowMatrix& points, int k, const KMeansConfig& config = {});

/// Sum of squared distances to barycenters (recomputed from the assignments
/// when the result carries none).
double kmeans_objective(const RowMatrix& points, const ClusterResult& result);

/// Top-down: repeatedly 2-means-splits the cluster with the largest
/// within-cluster sum of squares until k clusters exist.
ClusterResult bisecting_kmeans(const RowMatrix& points, int k, const KMeansConfig& config = {});

}  // namespace intentbench::cluster
