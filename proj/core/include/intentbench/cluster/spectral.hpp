#pragma once

#include <cstddef>
#include <cstdint>

#include "intentbench/cluster/kmeans.hpp"
#include "intentbench/cluster/result.hpp"

namespace intentbench::cluster {

struct Affinity {
  enum class Kind { Rbf, CosineKnn };
  Kind kind = Kind::Rbf;
  /// CosineKnn only.
  int neighbors = 10;
};

/// exp(-|xi - xj|^2 / (2 s^2)) with s the median pairwise distance; zero diagonal.
RowMatrix rbf_affinity(const RowMatrix& points);

/// Cosine similarity (clamped at 0) to each row's `neighbors` most similar
/// rows, symmetrized as (A + A^T) / 2.
RowMatrix cosine_knn_affinity(const RowMatrix& points, int neighbors);

std::size_t connected_components(const RowMatrix& affinity);

/// Normalized-Laplacian embedding of a precomputed affinity, row-normalized,
/// then K-means.
ClusterResult spectral_from_affinity(const RowMatrix& affinity, int k, const KMeansConfig& config);

ClusterResult spectral(const RowMatrix& points, int k, const Affinity& affinity, std::uint64_t seed);

}  // namespace intentbench::cluster
