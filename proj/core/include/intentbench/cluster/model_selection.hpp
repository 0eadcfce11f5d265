#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "intentbench/cluster/agglomerative.hpp"
#include "intentbench/cluster/birch.hpp"
#include "intentbench/cluster/kmeans.hpp"
#include "intentbench/cluster/result.hpp"
#include "intentbench/cluster/spectral.hpp"

namespace intentbench::cluster {

enum class Algorithm { KMeans, Bisecting, Agglomerative, Birch, Spectral, Dbscan };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm) noexcept;

/// An algorithm tag with every hyperparameter it may need.
struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::KMeans;
  KMeansConfig kmeans;
  Linkage linkage = Linkage::Ward;
  BirchConfig birch;
  Affinity affinity;
  double eps = 0.5;
  int min_pts = 5;

  bool k_parameterized() const noexcept { return algorithm != Algorithm::Dbscan; }
};

/// Dispatches to the algorithm named by `spec`; `k` is ignored by dbscan.
ClusterResult run_algorithm(const RowMatrix& points, const AlgorithmSpec& spec, int k);

/// Mean silhouette over non-noise rows; rows in singleton clusters score 0.
double silhouette(const RowMatrix& points, const ClusterResult& result);

struct KRange {
  int lo = 5;
  int hi = 50;
};

struct KSelection {
  int k = 0;
  /// (k, silhouette) for every k that produced a scorable clustering.
  std::vector<std::pair<int, double>> scores;
};

/// Silhouette-maximizing k over an inclusive range; ties go to the smaller k.
KSelection select_k(const RowMatrix& points, const AlgorithmSpec& spec, KRange range,
                    std::uint64_t seed);

}  // namespace intentbench::cluster
