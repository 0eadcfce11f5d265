#include <algorithm>

#include "intentbench/cluster/kmeans.hpp"
#include "intentbench/error.hpp"
#include "random.hpp"

namespace intentbench::cluster {

namespace {

RowMatrix gather(const RowMatrix& points, const std::vector<Index>& rows) {
  RowMatrix out(static_cast<Index>(rows.size()), points.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = points.row(rows[i]);
  return out;
}

double sum_of_squares(const RowMatrix& points, const std::vector<Index>& rows) {
  if (rows.size() < 2) return 0.0;
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(points.cols());
  for (Index r : rows) mean += points.row(r);
  mean /= static_cast<double>(rows.size());
  double total = 0.0;
  for (Index r : rows) total += (points.row(r) - mean).squaredNorm();
  return total;
}

}  // namespace

ClusterResult bisecting_kmeans(const RowMatrix& points, int k, const KMeansConfig& config) {
  config.validate();
  require_k_in_range(k, points.rows(), "bisecting");

  std::vector<std::vector<Index>> clusters(1);
  for (Index i = 0; i < points.rows(); ++i) clusters[0].push_back(i);
  std::vector<double> sse{sum_of_squares(points, clusters[0])};

  for (std::uint64_t split = 0; clusters.size() < static_cast<std::size_t>(k); ++split) {
    std::size_t target = clusters.size();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (sse[c] > 0.0 && (target == clusters.size() || sse[c] > sse[target])) target = c;
    }
    if (target == clusters.size()) {
      throw Error(ErrorKind::Degenerate, "bisecting: fewer than k=" + std::to_string(k) +
                                             " distinct rows");
    }

    KMeansConfig child = config;
    child.seed = detail::derive_seed(config.seed, split);
    const ClusterResult halves = kmeans(gather(points, clusters[target]), 2, child);

    std::vector<Index> left;
    std::vector<Index> right;
    for (std::size_t i = 0; i < clusters[target].size(); ++i) {
      (halves.assignments[i] == 0 ? left : right).push_back(clusters[target][i]);
    }
    clusters[target] = std::move(left);
    sse[target] = sum_of_squares(points, clusters[target]);
    sse.push_back(sum_of_squares(points, right));
    clusters.push_back(std::move(right));
  }

  ClusterResult result;
  result.assignments.assign(static_cast<std::size_t>(points.rows()), 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (Index r : clusters[c]) result.assignments[static_cast<std::size_t>(r)] = static_cast<int>(c);
  }
  result.k = k;
  result.algorithm = "bisecting";
  result.seed = config.seed;
  canonicalize_labels(result);
  result.barycenters = compute_barycenters(points, result.assignments, k);
  return result;
}

}  // namespace intentbench::cluster
