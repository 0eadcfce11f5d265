#pragma once

#include <Eigen/Core>

namespace intentbench {

/// Row-major dense matrix; one observation per row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

}  // namespace intentbench
