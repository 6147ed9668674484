#ifndef SEMEME_TYPES_HPP
#define SEMEME_TYPES_HPP

#include <Eigen/Dense>

namespace sememe {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Embedding tables: one vector per row, contiguous rows.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace sememe

#endif  // SEMEME_TYPES_HPP
