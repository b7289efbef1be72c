#pragma once

#include <Eigen/Dense>

namespace cvswap {

/// Solves A X + X A^T = -Q for X by Kronecker vectorization with one step of
/// iterative refinement. Sizes here are at most ~12, so the dense n^2 system
/// is cheap. Throws NumericError if the system is singular.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

/// max|A X + X A^T + Q| / (2 max|A| max|X| + max|Q|).
double lyapunov_relative_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                                  const Eigen::MatrixXd& q);

}  // namespace cvswap
