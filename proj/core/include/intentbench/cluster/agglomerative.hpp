#pragma once

#include <string_view>

#include "intentbench/cluster/result.hpp"

namespace intentbench::cluster {

enum class Linkage { Ward, Average, Complete, Single };

Linkage parse_linkage(std::string_view name);
std::string_view to_string(Linkage linkage) noexcept;

/// Bottom-up merging from n singletons down to k clusters. Each step merges
/// the pair with the smallest linkage dissimilarity; ties go to the smallest
/// (i, j) pair, where a cluster's index is its smallest member row.
ClusterResult agglomerative(const RowMatrix& points, int k, Linkage linkage = Linkage::Ward);

}  // namespace intentbench::cluster
