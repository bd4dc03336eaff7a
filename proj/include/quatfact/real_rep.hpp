#pragma once

#include "quatfact/qmatrix.hpp"

namespace quatfact {

/// 4m x 4n real representation of an m x n quaternion matrix, block layout
///
///     [  A0   A2   A1   A3 ]
///     [ -A2   A0   A3  -A1 ]
///     [ -A1  -A3   A0   A2 ]
///     [ -A3   A1  -A2   A0 ]
///
/// It satisfies real_rep(A·B*) = real_rep(A)·real_rep(B)^T, hence also
/// real_rep(A·B) = real_rep(A)·real_rep(B) and real_rep(A*) = real_rep(A)^T.
struct RealRep {
    RealMatrix m;
    Eigen::Index rows{0};  ///< quaternion rows
    Eigen::Index cols{0};  ///< quaternion cols
};

RealRep real_rep(const QMatrix &a);

/// Reads the quaternion matrix back out of block column `block` (0..3) of a
/// 4m x 4n real matrix with real-representation structure.
QMatrix from_real_rep_block(const RealMatrix &m, Eigen::Index rows, Eigen::Index cols, int block = 0);

}  // namespace quatfact
