#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <limits>
#include <stdexcept>
#include <string>

namespace dualpath {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when vector/matrix dimensions disagree with a problem's (n, m).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

} // namespace dualpath
