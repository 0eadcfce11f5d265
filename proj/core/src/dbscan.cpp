#include "intentbench/cluster/dbscan.hpp"

#include <deque>
#include <string>

#include "intentbench/error.hpp"

namespace intentbench::cluster {

ClusterResult dbscan(const RowMatrix& points, double eps, int min_pts) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Argument, "dbscan: eps must be > 0");
  if (min_pts < 1) throw Error(ErrorKind::Argument, "dbscan: min_pts must be >= 1");

  const auto n = static_cast<std::size_t>(points.rows());
  const double eps2 = eps * eps;
  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if ((points.row(static_cast<Index>(i)) - points.row(static_cast<Index>(j))).squaredNorm() <= eps2) {
        neighbors[i].push_back(j);
      }
    }
  }
  auto is_core = [&](std::size_t i) { return neighbors[i].size() >= static_cast<std::size_t>(min_pts); };

  constexpr int kUnvisited = -2;
  ClusterResult result;
  result.assignments.assign(n, kUnvisited);
  int clusters = 0;
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (result.assignments[i] != kUnvisited) continue;
    if (!is_core(i)) {
      result.assignments[i] = kNoise;
      continue;
    }
    const int label = clusters++;
    result.assignments[i] = label;
    frontier.assign(neighbors[i].begin(), neighbors[i].end());
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      if (result.assignments[p] == kNoise) result.assignments[p] = label;  // border point
      if (result.assignments[p] != kUnvisited) continue;
      result.assignments[p] = label;
      if (is_core(p)) frontier.insert(frontier.end(), neighbors[p].begin(), neighbors[p].end());
    }
  }

  result.k = clusters;
  result.algorithm = "dbscan";
  if (clusters > 0) result.barycenters = compute_barycenters(points, result.assignments, clusters);
  return result;
}

}  // namespace intentbench::cluster
