#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intentbench/matrix.hpp"

namespace intentbench::cluster {

/// Assignment value for points a density-based method leaves unclustered.
inline constexpr int kNoise = -1;

/// Hard assignment of every row to one of k clusters.
struct ClusterResult {
  std::vector<int> assignments;
  int k = 0;
  std::optional<RowMatrix> barycenters;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> warnings;
};

/// Renumbers clusters in order of first appearance (noise stays kNoise) and
/// permutes barycenter rows to match.
void canonicalize_labels(ClusterResult& result);

/// Mean of the rows assigned to each of k clusters. Noise rows are ignored.
RowMatrix compute_barycenters(const RowMatrix& points, std::span<const int> assignments, int k);

/// Sum of squared distances of rows to their assigned centroid.
double within_cluster_sum_of_squares(const RowMatrix& points, std::span<const int> assignments,
                                     const RowMatrix& centroids);

/// Size of each cluster 0..k-1 (noise not counted).
std::vector<std::size_t> cluster_sizes(std::span<const int> assignments, int k);

/// Throws Argument unless 1 <= k <= n.
void require_k_in_range(int k, Index n, std::string_view algorithm);

/// Number of distinct rows (exact equality).
std::size_t distinct_rows(const RowMatrix& points);

}  // namespace intentbench::cluster
