#include "intentbench/cluster/result.hpp"

#include <algorithm>
#include <map>

#include "intentbench/error.hpp"

namespace intentbench::cluster {

void canonicalize_labels(ClusterResult& result) {
  std::vector<int> relabel(static_cast<std::size_t>(std::max(result.k, 0)), -1);
  int next = 0;
  for (int label : result.assignments) {
    if (label == kNoise) continue;
    auto& slot = relabel.at(static_cast<std::size_t>(label));
    if (slot < 0) slot = next++;
  }
  for (auto& slot : relabel) {
    if (slot < 0) slot = next++;
  }
  for (int& label : result.assignments) {
    if (label != kNoise) label = relabel[static_cast<std::size_t>(label)];
  }
  if (result.barycenters) {
    RowMatrix permuted(result.barycenters->rows(), result.barycenters->cols());
    for (std::size_t old = 0; old < relabel.size(); ++old) {
      permuted.row(relabel[old]) = result.barycenters->row(static_cast<Index>(old));
    }
    result.barycenters = std::move(permuted);
  }
}

RowMatrix compute_barycenters(const RowMatrix& points, std::span<const int> assignments, int k) {
  RowMatrix sums = RowMatrix::Zero(k, points.cols());
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    const int label = assignments[static_cast<std::size_t>(i)];
    if (label == kNoise) continue;
    sums.row(label) += points.row(i);
    ++counts[static_cast<std::size_t>(label)];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      sums.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
  }
  return sums;
}

double within_cluster_sum_of_squares(const RowMatrix& points, std::span<const int> assignments,
                                     const RowMatrix& centroids) {
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    const int label = assignments[static_cast<std::size_t>(i)];
    if (label == kNoise) continue;
    total += (points.row(i) - centroids.row(label)).squaredNorm();
  }
  return total;
}

std::vector<std::size_t> cluster_sizes(std::span<const int> assignments, int k) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(k, 0)), 0);
  for (int label : assignments) {
    if (label != kNoise) ++sizes.at(static_cast<std::size_t>(label));
  }
  return sizes;
}

void require_k_in_range(int k, Index n, std::string_view algorithm) {
  if (k < 1 || k > n) {
    throw Error(ErrorKind::Argument, std::string(algorithm) + ": k=" + std::to_string(k) +
                                         " outside [1, " + std::to_string(n) + "]");
  }
}

std::size_t distinct_rows(const RowMatrix& points) {
  std::vector<Index> order(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) order[static_cast<std::size_t>(i)] = i;
  auto less = [&](Index a, Index b) {
    for (Index j = 0; j < points.cols(); ++j) {
      if (points(a, j) != points(b, j)) return points(a, j) < points(b, j);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = order.empty() ? 0 : 1;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (less(order[i - 1], order[i])) ++distinct;
  }
  return distinct;
}

}  // namespace intentbench::cluster
