#pragma once

// Entanglement swapping: Charlie mixes the two filtered output modes on a
// beam splitter of transmissivity T and homodynes conjugate quadratures on
// the two ports. Conditioning the remaining matter modes on the outcomes
// yields the remote CM.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cvswap/gaussian.hpp"

namespace cvswap {

using Matrix8d = Eigen::Matrix<double, 8, 8>;
using Matrix82d = Eigen::Matrix<double, 8, 2>;

/// Two-node CM partitioned as [[A, C1, C2], [C1^T, B1, Dx], [C2^T, Dx^T, B2]]
/// with matter modes (m_A, b_A, m_B, b_B) and optical modes (f_A, f_B).
struct SwapBlocks {
  Matrix8d A = Matrix8d::Zero();
  Matrix82d C1 = Matrix82d::Zero();
  Matrix82d C2 = Matrix82d::Zero();
  Eigen::Matrix2d B1 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d B2 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d Dx = Eigen::Matrix2d::Zero();
  double transmissivity = 0.5;

  static const std::vector<std::string>& matter_labels();
  static const std::vector<std::string>& all_labels();  // matter then f_A, f_B

  /// The assembled 12x12 CM in all_labels() order.
  CovarianceMatrix full() const;
  /// Inverse of full(): picks the blocks out of a 6-mode CM by label.
  static SwapBlocks from_full(const CovarianceMatrix& v, double transmissivity = 0.5);
};

struct SwapResult {
  CovarianceMatrix conditioned;  // labels m_A, b_A, m_B, b_B
  Eigen::Matrix2d gamma;         // covariance of the two measured quadratures
  std::map<std::string, double> pair_negativities;  // key "m_A,b_B" etc.
  double asymmetry = 0.0;        // max |V - V^T| before symmetrization
};

/// Closed-form conditioning through gamma_1..3 and the K matrices.
/// MeasurementDegeneracyError if det Gamma <= 1e-14 max(gamma_1, gamma_2)^2.
SwapResult bell_condition(const SwapBlocks& blocks);

/// Independent route: explicit beam-splitter symplectic on the optics, then
/// conditioning on the projected measured block via its pseudo-inverse.
CovarianceMatrix general_dyne_oracle(const SwapBlocks& blocks);

struct McEstimate {
  CovarianceMatrix estimate;
  Eigen::MatrixXd standard_error;
  long samples = 0;
};

/// Sampling oracle: draws joint quadrature vectors, applies the beam splitter
/// and estimates the matter covariance conditioned on the two homodyne
/// outcomes. Deterministic for a given (samples, seed).
McEstimate mc_homodyne_oracle(const SwapBlocks& blocks, long samples, std::uint64_t seed);

/// E_N between two labelled modes of the conditioned CM.
double remote_log_negativity(const SwapResult& r, std::string_view first, std::string_view second);
double remote_log_negativity(const CovarianceMatrix& conditioned, std::string_view first,
                             std::string_view second);

}  // namespace cvswap
