#ifndef KEYCLUST_TYPES_HPP
#define KEYCLUST_TYPES_HPP

#include <Eigen/Core>

namespace keyclust {

using Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// One observation per row.
template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace keyclust

#endif  // KEYCLUST_TYPES_HPP
