#include "cvswap/lyapunov.hpp"

#include <algorithm>

#include "cvswap/errors.hpp"

namespace cvswap {

namespace {

Eigen::MatrixXd lyapunov_operator(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  // vec(A X + X A^T) = (I (x) A + A (x) I) vec(X), column-major vec.
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      op.block(j * n, l * n, n, n) = id(j, l) * a + a(j, l) * id;
    }
  }
  return op;
}

}  // namespace

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  const auto n = a.rows();
  if (a.cols() != n || q.rows() != n || q.cols() != n) {
    throw StructuralError("lyapunov: dimension mismatch");
  }
  if (!a.allFinite() || !q.allFinite()) throw NumericError("lyapunov: non-finite input");

  const Eigen::MatrixXd op = lyapunov_operator(a);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(op);
  if (!lu.isInvertible()) throw NumericError("lyapunov: singular operator (eigenvalues sum to zero)");

  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(q.data(), n * n);
  Eigen::VectorXd sol = lu.solve(rhs);
  sol += lu.solve(rhs - op * sol);

  Eigen::MatrixXd x = Eigen::Map<Eigen::MatrixXd>(sol.data(), n, n);
  return 0.5 * (x + x.transpose());
}

double lyapunov_relative_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                                  const Eigen::MatrixXd& q) {
  const Eigen::MatrixXd r = a * x + x * a.transpose() + q;
  const double scale = 2.0 * a.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff() +
                       q.cwiseAbs().maxCoeff();
  return r.cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
}

}  // namespace cvswap
