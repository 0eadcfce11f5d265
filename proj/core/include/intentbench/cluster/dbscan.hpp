#pragma once

#include "intentbench/cluster/result.hpp"

namespace intentbench::cluster {

/// Density clustering. A row is a core point when at least `min_pts` rows
/// (itself included) lie within distance `eps`. Rows not density-reachable
/// from any core point get kNoise; k counts the clusters found (may be 0).
ClusterResult dbscan(const RowMatrix& points, double eps, int min_pts);

}  // namespace intentbench::cluster
