#include "intentbench/cluster/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "intentbench/error.hpp"

namespace intentbench::cluster {

namespace {

double median(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

RowMatrix rbf_affinity(const RowMatrix& points) {
  const Index n = points.rows();
  RowMatrix sq = RowMatrix::Zero(n, n);
  std::vector<double> distances;
  std::vector<double> positive;
  distances.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d2 = (points.row(i) - points.row(j)).squaredNorm();
      sq(i, j) = sq(j, i) = d2;
      distances.push_back(std::sqrt(d2));
      if (d2 > 0.0) positive.push_back(distances.back());
    }
  }
  RowMatrix affinity = RowMatrix::Zero(n, n);
  if (positive.empty()) return affinity;

  double bandwidth = median(distances);
  // Mostly-duplicate data: fall back to the median over distinct pairs.
  if (!(bandwidth > 0.0)) bandwidth = median(positive);
  const double scale = 1.0 / (2.0 * bandwidth * bandwidth);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) affinity(i, j) = std::exp(-sq(i, j) * scale);
    }
  }
  return affinity;
}

RowMatrix cosine_knn_affinity(const RowMatrix& points, int neighbors) {
  if (neighbors < 1) throw Error(ErrorKind::Argument, "spectral: neighbors must be >= 1");
  const Index n = points.rows();
  const auto m = static_cast<std::size_t>(std::min<Index>(neighbors, std::max<Index>(n - 1, 0)));

  Eigen::VectorXd norms = points.rowwise().norm();
  RowMatrix adjacency = RowMatrix::Zero(n, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::vector<double> sim(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double denom = norms(i) * norms(j);
      sim[static_cast<std::size_t>(j)] = denom > 0.0 ? points.row(i).dot(points.row(j)) / denom : 0.0;
    }
    std::iota(order.begin(), order.end(), 0);
    order.erase(order.begin() + i);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return sim[static_cast<std::size_t>(a)] > sim[static_cast<std::size_t>(b)];
    });
    for (std::size_t r = 0; r < m; ++r) {
      adjacency(i, order[r]) = std::max(sim[static_cast<std::size_t>(order[r])], 0.0);
    }
    order.resize(static_cast<std::size_t>(n));
  }
  RowMatrix symmetric = 0.5 * (adjacency + adjacency.transpose());
  return symmetric;
}

std::size_t connected_components(const RowMatrix& affinity) {
  const auto n = static_cast<std::size_t>(affinity.rows());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (affinity(static_cast<Index>(i), static_cast<Index>(j)) <= 0.0) continue;
      const auto a = find(i);
      const auto b = find(j);
      if (a != b) {
        parent[std::max(a, b)] = std::min(a, b);
        --components;
      }
    }
  }
  return components;
}

ClusterResult spectral_from_affinity(const RowMatrix& affinity, int k, const KMeansConfig& config) {
  const Index n = affinity.rows();
  if (affinity.cols() != n) throw Error(ErrorKind::Argument, "spectral: affinity must be square");
  if (k < 2 || k > n) {
    throw Error(ErrorKind::Argument, "spectral: k=" + std::to_string(k) + " outside [2, " +
                                         std::to_string(n) + "]");
  }
  if ((affinity.array() < 0.0).any() || !affinity.allFinite()) {
    throw Error(ErrorKind::Argument, "spectral: affinity must be finite and non-negative");
  }
  if (!affinity.isApprox(affinity.transpose(), 1e-12)) {
    throw Error(ErrorKind::Argument, "spectral: affinity must be symmetric");
  }

  const Eigen::VectorXd degree = affinity.rowwise().sum();
  const Eigen::VectorXd inv_sqrt =
      degree.unaryExpr([](double d) { return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0; });
  Eigen::MatrixXd laplacian = -(inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal());
  laplacian.diagonal().array() += 1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Numeric, "spectral: eigen decomposition did not converge");
  }

  // Eigenvalues come back ascending.
  RowMatrix embedding = solver.eigenvectors().leftCols(k);
  for (Index i = 0; i < n; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 0.0) embedding.row(i) /= norm;
  }

  ClusterResult result = kmeans(embedding, k, config);
  result.algorithm = "spectral";
  result.barycenters.reset();
  if (const auto components = connected_components(affinity); components > static_cast<std::size_t>(k)) {
    result.warnings.push_back("spectral: affinity graph has " + std::to_string(components) +
                              " connected components for k=" + std::to_string(k));
  }
  return result;
}

ClusterResult spectral(const RowMatrix& points, int k, const Affinity& affinity, std::uint64_t seed) {
  if (k < 2 || k > points.rows()) {
    throw Error(ErrorKind::Argument, "spectral: k=" + std::to_string(k) + " outside [2, " +
                                         std::to_string(points.rows()) + "]");
  }
  if (distinct_rows(points) < static_cast<std::size_t>(k)) {
    throw Error(ErrorKind::Degenerate, "spectral: fewer than k=" + std::to_string(k) + " distinct rows");
  }
  const RowMatrix w = affinity.kind == Affinity::Kind::Rbf ? rbf_affinity(points)
                                                           : cosine_knn_affinity(points, affinity.neighbors);
  KMeansConfig config;
  config.seed = seed;
  ClusterResult result = spectral_from_affinity(w, k, config);
  result.barycenters = compute_barycenters(points, result.assignments, k);
  return result;
}

}  // namespace intentbench::cluster
