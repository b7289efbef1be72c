#include "cvswap/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cvswap/errors.hpp"

namespace cvswap {

namespace {

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw NumericError("covariance matrix has non-finite entries");
}

void check_bipartition(const CovarianceMatrix& v, const Bipartition& part) {
  std::set<int> seen;
  for (const auto* side : {&part.side_a, &part.side_b}) {
    for (int idx : *side) {
      if (idx < 0 || idx >= v.n_modes()) {
        throw StructuralError("bipartition index " + std::to_string(idx) + " out of range");
      }
      if (!seen.insert(idx).second) {
        throw StructuralError("bipartition sides overlap at mode " + std::to_string(idx));
      }
    }
  }
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries, std::vector<std::string> labels)
    : entries_(std::move(entries)), labels_(std::move(labels)) {
  if (entries_.rows() != entries_.cols()) {
    throw StructuralError("covariance matrix is not square");
  }
  if (entries_.rows() % 2 != 0 || entries_.rows() == 0) {
    throw StructuralError("covariance matrix dimension must be even and positive");
  }
  if (static_cast<Eigen::Index>(2 * labels_.size()) != entries_.rows()) {
    throw StructuralError("mode label count " + std::to_string(labels_.size()) +
                          " does not match matrix dimension " + std::to_string(entries_.rows()));
  }
  std::set<std::string_view> unique(labels_.begin(), labels_.end());
  if (unique.size() != labels_.size()) throw StructuralError("duplicate mode labels");
}

CovarianceMatrix CovarianceMatrix::vacuum(std::vector<std::string> labels) {
  const auto n = static_cast<Eigen::Index>(2 * labels.size());
  return CovarianceMatrix(kVacuumVariance * Eigen::MatrixXd::Identity(n, n), std::move(labels));
}

int CovarianceMatrix::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw StructuralError("unknown mode label '" + std::string(label) + "'");
  return static_cast<int>(it - labels_.begin());
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

std::vector<double> symplectic_spectrum(const CovarianceMatrix& v) {
  require_finite(v.matrix());
  const int n = v.n_modes();
  // Eigenvalues of Omega*V come in pairs +-i*nu.
  Eigen::EigenSolver<Eigen::MatrixXd> solver(symplectic_form(n) * v.matrix(), false);
  if (solver.info() != Eigen::Success) throw NumericError("symplectic eigen-solver failed");
  std::vector<double> moduli;
  moduli.reserve(2 * n);
  for (const auto& ev : solver.eigenvalues()) moduli.push_back(std::abs(ev));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  std::vector<double> spectrum;
  spectrum.reserve(n);
  for (int k = 0; k < n; ++k) spectrum.push_back(0.5 * (moduli[2 * k] + moduli[2 * k + 1]));
  return spectrum;
}

ValidityReport validate_cm(const CovarianceMatrix& v, double tol) {
  ValidityReport report;
  const Eigen::MatrixXd& m = v.matrix();
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  report.symmetric = (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  const auto spectrum = symplectic_spectrum(v);
  report.min_symplectic_eigenvalue = spectrum.back();
  report.physical = report.symmetric && report.min_symplectic_eigenvalue >= kVacuumVariance - tol;
  return report;
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& v, const Bipartition& part) {
  check_bipartition(v, part);
  Eigen::MatrixXd flipped = v.matrix();
  for (int mode : part.side_b) {
    flipped.row(2 * mode + 1) *= -1.0;
    flipped.col(2 * mode + 1) *= -1.0;
  }
  return CovarianceMatrix(std::move(flipped), v.labels());
}

double log_negativity(const CovarianceMatrix& v, const Bipartition& part) {
  check_bipartition(v, part);
  if (part.side_a.size() != 1 || part.side_b.size() != 1) {
    throw StructuralError("closed-form negativity needs exactly one mode per side");
  }
  require_finite(v.matrix());
  const std::vector<int> keep{part.side_a.front(), part.side_b.front()};
  const Eigen::Matrix4d two_mode = reduce_modes(v, keep).matrix();

  const Eigen::Matrix2d a = two_mode.topLeftCorner<2, 2>();
  const Eigen::Matrix2d b = two_mode.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d c = two_mode.topRightCorner<2, 2>();
  const double sigma = a.determinant() + b.determinant() - 2.0 * c.determinant();
  const double det_v = two_mode.determinant();

  double disc = sigma * sigma - 4.0 * det_v;
  if (disc < 0.0) {
    if (disc < -1e-9 * std::max(sigma * sigma, 1e-300)) {
      throw NumericError("sigma^2 < 4 det V: not a valid two-mode covariance matrix");
    }
    disc = 0.0;
  }
  const double eta_sq = 0.5 * (sigma - std::sqrt(disc));
  if (eta_sq <= 0.0) throw NumericError("non-positive partially transposed symplectic eigenvalue");
  const double eta = std::sqrt(eta_sq);
  return std::max(0.0, -std::log(2.0 * eta));
}

double log_negativity_spectral(const CovarianceMatrix& v, const Bipartition& part) {
  const auto spectrum = symplectic_spectrum(partial_transpose(v, part));
  double total = 0.0;
  for (double nu : spectrum) {
    if (nu < kVacuumVariance) total -= std::log(2.0 * nu);
  }
  return total;
}

CovarianceMatrix reduce_modes(const CovarianceMatrix& v, std::span<const int> keep) {
  if (keep.empty()) throw StructuralError("reduce_modes needs at least one mode");
  std::set<int> seen;
  for (int idx : keep) {
    if (idx < 0 || idx >= v.n_modes()) {
      throw StructuralError("mode index " + std::to_string(idx) + " out of range");
    }
    if (!seen.insert(idx).second) throw StructuralError("duplicate mode index in keep list");
  }
  const auto k = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd out(2 * k, 2 * k);
  std::vector<std::string> labels;
  labels.reserve(keep.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    labels.push_back(v.labels()[keep[i]]);
    for (Eigen::Index j = 0; j < k; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = v.block(keep[i], keep[j]);
    }
  }
  return CovarianceMatrix(std::move(out), std::move(labels));
}

CovarianceMatrix direct_sum(const CovarianceMatrix& first, const CovarianceMatrix& second) {
  std::vector<std::string> labels = first.labels();
  for (const auto& label : second.labels()) {
    if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
      throw StructuralError("label collision in direct sum: '" + label + "'");
    }
    labels.push_back(label);
  }
  const auto n1 = first.matrix().rows();
  const auto n2 = second.matrix().rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  out.topLeftCorner(n1, n1) = first.matrix();
  out.bottomRightCorner(n2, n2) = second.matrix();
  return CovarianceMatrix(std::move(out), std::move(labels));
}

}  // namespace cvswap
