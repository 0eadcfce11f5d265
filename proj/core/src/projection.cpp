#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>

#include "intentbench/error.hpp"
#include "intentbench/pipeline.hpp"

namespace intentbench::pipeline {

Projection project_2d(const RowMatrix& points, const cluster::ClusterResult& result) {
  const Index n = points.rows();
  const Index d = points.cols();
  if (n < 2 || d < 2) throw Error(ErrorKind::Argument, "project: need at least 2 rows and 2 columns");
  if (result.assignments.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::Argument, "project: assignment count does not match rows");
  }

  const Eigen::RowVectorXd mean = points.colwise().mean();
  const RowMatrix centered = points.rowwise() - mean;
  const Eigen::MatrixXd covariance = (centered.transpose() * centered) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::Numeric, "project: eigen decomposition failed");

  Projection projection;
  Eigen::MatrixXd axes(d, 2);
  for (Index c = 0; c < 2; ++c) {
    const Index source = d - 1 - c;  // eigenvalues ascend
    Eigen::VectorXd axis = solver.eigenvectors().col(source);
    Index pivot = 0;
    axis.cwiseAbs().maxCoeff(&pivot);
    if (axis(pivot) < 0.0) axis = -axis;
    axes.col(c) = axis;
    projection.variances(c) = std::max(solver.eigenvalues()(source), 0.0);
  }
  const double scale = std::max(projection.variances(0), 1.0) * 1e-12;
  if (projection.variances(1) <= scale) {
    axes.col(1).setZero();
    projection.variances(1) = 0.0;
    projection.warnings.push_back("project: data has rank < 2; second component zero-filled");
  }

  projection.coordinates = centered * axes;
  const RowMatrix barycenters = result.barycenters
                                    ? *result.barycenters
                                    : cluster::compute_barycenters(points, result.assignments, result.k);
  projection.barycenter_coordinates = (barycenters.rowwise() - mean) * axes;
  return projection;
}

std::string render_projection_csv(const Projection& projection, std::span<const std::string> ids,
                                  const cluster::ClusterResult& result) {
  std::string out = "id,x,y,cluster,is_barycenter\n";
  char buffer[96];
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  };
  for (Index i = 0; i < projection.coordinates.rows(); ++i) {
    std::snprintf(buffer, sizeof buffer, ",%.17g,%.17g,%d,0\n", projection.coordinates(i, 0),
                  projection.coordinates(i, 1), result.assignments[static_cast<std::size_t>(i)]);
    out += quote(ids[static_cast<std::size_t>(i)]) + buffer;
  }
  for (Index c = 0; c < projection.barycenter_coordinates.rows(); ++c) {
    std::snprintf(buffer, sizeof buffer, "barycenter:%d,%.17g,%.17g,%d,1\n", static_cast<int>(c),
                  projection.barycenter_coordinates(c, 0), projection.barycenter_coordinates(c, 1),
                  static_cast<int>(c));
    out += buffer;
  }
  return out;
}

}  // namespace intentbench::pipeline
