#pragma once

// Covariance-matrix algebra for zero-mean Gaussian states.
//
// Conventions: quadratures are interleaved per mode (x1, p1, x2, p2, ...),
// the vacuum has variance 1/2, and the symplectic form is the block-diagonal
// sum of [[0, 1], [-1, 0]].

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cvswap {

inline constexpr double kVacuumVariance = 0.5;

/// Physicality tolerance for analytically constructed CMs.
inline constexpr double kStrictTolerance = 1e-9;
/// Physicality tolerance for CMs produced by frequency integration.
inline constexpr double kLooseTolerance = 1e-6;

class CovarianceMatrix {
 public:
  /// Throws StructuralError unless `entries` is square with side
  /// 2 * labels.size() and the labels are unique.
  CovarianceMatrix(Eigen::MatrixXd entries, std::vector<std::string> labels);

  static CovarianceMatrix vacuum(std::vector<std::string> labels);

  int n_modes() const { return static_cast<int>(labels_.size()); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Index of the mode carrying `label`; StructuralError if absent.
  int index_of(std::string_view label) const;

  /// 2x2 block between modes i and j.
  Eigen::Matrix2d block(int i, int j) const { return entries_.block<2, 2>(2 * i, 2 * j); }

 private:
  Eigen::MatrixXd entries_;
  std::vector<std::string> labels_;
};

struct Bipartition {
  std::vector<int> side_a;
  std::vector<int> side_b;
};

struct ValidityReport {
  bool symmetric = false;
  bool physical = false;
  double min_symplectic_eigenvalue = 0.0;
};

/// Standard symplectic form for n modes.
Eigen::MatrixXd symplectic_form(int n_modes);

/// Checks symmetry (1e-12 relative) and the uncertainty relation: every
/// symplectic eigenvalue must be at least 1/2 - tol.
ValidityReport validate_cm(const CovarianceMatrix& v, double tol = kStrictTolerance);

/// Moduli of the eigenvalues of i*Omega*V, one per mode, in descending order.
std::vector<double> symplectic_spectrum(const CovarianceMatrix& v);

/// Flips the momentum quadrature of every mode on side_b.
CovarianceMatrix partial_transpose(const CovarianceMatrix& v, const Bipartition& part);

/// Two-mode logarithmic negativity from the closed-form least symplectic
/// eigenvalue of the partial transpose. Each side of `part` must name exactly
/// one mode; other modes are traced out first.
double log_negativity(const CovarianceMatrix& v, const Bipartition& part);

/// Same quantity through the general route: the full symplectic spectrum of
/// the partial transpose. Works for any bipartition.
double log_negativity_spectral(const CovarianceMatrix& v, const Bipartition& part);

/// Sub-CM on the kept modes, in the requested order.
CovarianceMatrix reduce_modes(const CovarianceMatrix& v, std::span<const int> keep);

/// Block-diagonal composition of independent systems.
CovarianceMatrix direct_sum(const CovarianceMatrix& first, const CovarianceMatrix& second);

}  // namespace cvswap
