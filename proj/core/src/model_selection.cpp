#include "intentbench/cluster/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "intentbench/cluster/dbscan.hpp"
#include "intentbench/error.hpp"

namespace intentbench::cluster {

namespace {

RowMatrix pairwise_distances(const RowMatrix& points) {
  const Index n = points.rows();
  RowMatrix d = RowMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
  }
  return d;
}

double silhouette_from_distances(const RowMatrix& distances, const ClusterResult& result) {
  if (result.k < 2) throw Error(ErrorKind::Argument, "silhouette requires k >= 2");
  const auto& labels = result.assignments;
  const auto sizes = cluster_sizes(labels, result.k);
  if (std::none_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s >= 2; })) {
    throw Error(ErrorKind::Argument, "silhouette requires a cluster with at least 2 points");
  }

  const auto n = labels.size();
  std::vector<double> sums(static_cast<std::size_t>(result.k));
  double total = 0.0;
  std::size_t scored = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int own = labels[i];
    if (own == kNoise) continue;
    ++scored;
    if (sizes[static_cast<std::size_t>(own)] < 2) continue;

    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j] != kNoise) sums[static_cast<std::size_t>(labels[j])] += distances(static_cast<Index>(i), static_cast<Index>(j));
    }
    const double a = sums[static_cast<std::size_t>(own)] / static_cast<double>(sizes[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < result.k; ++c) {
      if (c == own || sizes[static_cast<std::size_t>(c)] == 0) continue;
      b = std::min(b, sums[static_cast<std::size_t>(c)] / static_cast<double>(sizes[static_cast<std::size_t>(c)]));
    }
    const double denom = std::max(a, b);
    if (std::isfinite(b) && denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(scored);
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "kmeans") return Algorithm::KMeans;
  if (name == "bisecting") return Algorithm::Bisecting;
  if (name == "agglomerative") return Algorithm::Agglomerative;
  if (name == "birch") return Algorithm::Birch;
  if (name == "spectral") return Algorithm::Spectral;
  if (name == "dbscan") return Algorithm::Dbscan;
  throw Error(ErrorKind::Argument, "unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::KMeans: return "kmeans";
    case Algorithm::Bisecting: return "bisecting";
    case Algorithm::Agglomerative: return "agglomerative";
    case Algorithm::Birch: return "birch";
    case Algorithm::Spectral: return "spectral";
    case Algorithm::Dbscan: return "dbscan";
  }
  return "kmeans";
}

ClusterResult run_algorithm(const RowMatrix& points, const AlgorithmSpec& spec, int k) {
  switch (spec.algorithm) {
    case Algorithm::KMeans: return kmeans(points, k, spec.kmeans);
    case Algorithm::Bisecting: return bisecting_kmeans(points, k, spec.kmeans);
    case Algorithm::Agglomerative: return agglomerative(points, k, spec.linkage);
    case Algorithm::Birch: return birch(points, spec.birch.threshold, spec.birch.branching, k);
    case Algorithm::Spectral: return spectral(points, k, spec.affinity, spec.kmeans.seed);
    case Algorithm::Dbscan: return dbscan(points, spec.eps, spec.min_pts);
  }
  throw Error(ErrorKind::Argument, "unknown algorithm");
}

double silhouette(const RowMatrix& points, const ClusterResult& result) {
  if (result.assignments.size() != static_cast<std::size_t>(points.rows())) {
    throw Error(ErrorKind::Argument, "silhouette: assignment count does not match rows");
  }
  if (result.k < 2) throw Error(ErrorKind::Argument, "silhouette requires k >= 2");
  return silhouette_from_distances(pairwise_distances(points), result);
}

KSelection select_k(const RowMatrix& points, const AlgorithmSpec& spec, KRange range, std::uint64_t seed) {
  if (!spec.k_parameterized()) {
    throw Error(ErrorKind::Argument, "select_k: " + std::string(to_string(spec.algorithm)) +
                                         " does not take k");
  }
  if (range.lo > range.hi) {
    throw Error(ErrorKind::Argument, "select_k: empty range [" + std::to_string(range.lo) + ", " +
                                         std::to_string(range.hi) + "]");
  }
  if (range.lo < 2 || range.hi > points.rows()) {
    throw Error(ErrorKind::Argument, "select_k: range must lie within [2, " +
                                         std::to_string(points.rows()) + "]");
  }

  KSelection selection;
  if (range.lo == range.hi) {
    selection.k = range.lo;
    return selection;
  }

  AlgorithmSpec seeded = spec;
  seeded.kmeans.seed = seed;
  const RowMatrix distances = pairwise_distances(points);
  double best = -std::numeric_limits<double>::infinity();
  for (int k = range.lo; k <= range.hi; ++k) {
    double score = 0.0;
    try {
      score = silhouette_from_distances(distances, run_algorithm(points, seeded, k));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Degenerate && e.kind() != ErrorKind::Argument) throw;
      continue;
    }
    selection.scores.emplace_back(k, score);
    if (score > best) {
      best = score;
      selection.k = k;
    }
  }
  if (selection.scores.empty()) {
    throw Error(ErrorKind::Degenerate, "select_k: no k in range produced a scorable clustering");
  }
  return selection;
}

}  // namespace intentbench::cluster
