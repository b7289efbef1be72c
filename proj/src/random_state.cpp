#include "cvswap/random_state.hpp"

#include <complex>

namespace cvswap {

namespace {

// Orthogonal symplectic matrix from a Haar-random unitary.
Eigen::MatrixXd random_passive(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = {normal(rng), normal(rng)};
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));

  // a -> U a acts on (x_k, p_k) as [[Re U, -Im U], [Im U, Re U]].
  Eigen::MatrixXd o(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = q(i, j).real();
      const double im = q(i, j).imag();
      o(2 * i, 2 * j) = re;
      o(2 * i, 2 * j + 1) = -im;
      o(2 * i + 1, 2 * j) = im;
      o(2 * i + 1, 2 * j + 1) = re;
    }
  }
  return o;
}

}  // namespace

Eigen::MatrixXd random_symplectic(int n_modes, std::mt19937_64& rng, double max_squeeze) {
  std::uniform_real_distribution<double> squeeze(-max_squeeze, max_squeeze);
  Eigen::VectorXd diag(2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const double z = std::exp(squeeze(rng));
    diag(2 * k) = z;
    diag(2 * k + 1) = 1.0 / z;
  }
  return random_passive(n_modes, rng) * diag.asDiagonal() * random_passive(n_modes, rng);
}

CovarianceMatrix random_gaussian_state(std::vector<std::string> labels, std::mt19937_64& rng, double max_squeeze) {
  const int n = static_cast<int>(labels.size());
  std::exponential_distribution<double> excess(1.0);
  Eigen::VectorXd nu(2 * n);
  for (int k = 0; k < n; ++k) nu(2 * k) = nu(2 * k + 1) = kVacuumVariance + excess(rng);
  const Eigen::MatrixXd s = random_symplectic(n, rng, max_squeeze);
  Eigen::MatrixXd v = s * nu.asDiagonal() * s.transpose();
  v = 0.5 * (v + v.transpose()).eval();
  return CovarianceMatrix(v, std::move(labels));
}

}  // namespace cvswap
