#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace ktrr {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// m x n, one column per sample.
using DataMatrix = Matrix;

/// Cluster ids in [0, k).
using Labels = std::vector<int>;

}  // namespace ktrr
