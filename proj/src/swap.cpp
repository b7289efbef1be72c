#include "cvswap/swap.hpp"

#include <cmath>
#include <random>

#include "cvswap/errors.hpp"

namespace cvswap {

namespace {

using Matrix12d = Eigen::Matrix<double, 12, 12>;

void check_transmissivity(double t) {
  if (!(t > 0.0 && t < 1.0)) throw ConfigError("transmissivity must lie strictly between 0 and 1");
}

// Beam splitter on the optical pair: out1 = sqrt(T) a1 + sqrt(1-T) a2,
// out2 = -sqrt(1-T) a1 + sqrt(T) a2, acting identically on x and p.
Matrix12d beam_splitter(double t) {
  Matrix12d s = Matrix12d::Identity();
  const double ct = std::sqrt(t);
  const double st = std::sqrt(1.0 - t);
  for (int q = 0; q < 2; ++q) {
    const int i = 8 + q;
    const int j = 10 + q;
    s(i, i) = ct;
    s(i, j) = st;
    s(j, i) = -st;
    s(j, j) = ct;
  }
  return s;
}

// Charlie reads p on port 1 and x on port 2.
constexpr int kMeasuredP1 = 9;
constexpr int kMeasuredX2 = 10;

void check_measurement(double g1, double g2, double det) {
  const double scale = std::max(std::abs(g1), std::abs(g2));
  if (!(det > 1e-14 * scale * scale)) {
    throw MeasurementDegeneracyError("Bell measurement covariance is singular (det Gamma = " +
                                     std::to_string(det) + ")");
  }
}

}  // namespace

const std::vector<std::string>& SwapBlocks::matter_labels() {
  static const std::vector<std::string> labels{"m_A", "b_A", "m_B", "b_B"};
  return labels;
}

const std::vector<std::string>& SwapBlocks::all_labels() {
  static const std::vector<std::string> labels{"m_A", "b_A", "m_B", "b_B", "f_A", "f_B"};
  return labels;
}

CovarianceMatrix SwapBlocks::full() const {
  Matrix12d v;
  v.topLeftCorner<8, 8>() = A;
  v.block<8, 2>(0, 8) = C1;
  v.block<8, 2>(0, 10) = C2;
  v.block<2, 8>(8, 0) = C1.transpose();
  v.block<2, 8>(10, 0) = C2.transpose();
  v.block<2, 2>(8, 8) = B1;
  v.block<2, 2>(10, 10) = B2;
  v.block<2, 2>(8, 10) = Dx;
  v.block<2, 2>(10, 8) = Dx.transpose();
  return CovarianceMatrix(v, all_labels());
}

SwapBlocks SwapBlocks::from_full(const CovarianceMatrix& v, double transmissivity) {
  check_transmissivity(transmissivity);
  if (v.n_modes() != 6) throw StructuralError("two-node CM must have six modes");
  std::vector<int> order;
  for (const auto& label : all_labels()) order.push_back(v.index_of(label));
  const Eigen::MatrixXd w = reduce_modes(v, order).matrix();
  SwapBlocks b;
  b.A = w.topLeftCorner<8, 8>();
  b.C1 = w.block<8, 2>(0, 8);
  b.C2 = w.block<8, 2>(0, 10);
  b.B1 = w.block<2, 2>(8, 8);
  b.B2 = w.block<2, 2>(10, 10);
  b.Dx = w.block<2, 2>(8, 10);
  b.transmissivity = transmissivity;
  return b;
}

SwapResult bell_condition(const SwapBlocks& b) {
  const double t = b.transmissivity;
  check_transmissivity(t);
  const double a1 = b.B1(0, 0), a2 = b.B1(1, 1), a3 = b.B1(0, 1);
  const double a1p = b.B2(0, 0), a2p = b.B2(1, 1), a3p = b.B2(0, 1);
  const double b1 = b.Dx(0, 0), b2 = b.Dx(1, 1), b3 = b.Dx(0, 1), b4 = b.Dx(1, 0);
  const double s = std::sqrt(t * (1.0 - t));

  const double g1 = (1.0 - t) * a1 + t * a1p - 2.0 * s * b1;
  const double g2 = t * a2 + (1.0 - t) * a2p + 2.0 * s * b2;
  const double g3 = s * (a3p - a3) - (1.0 - t) * b3 + t * b4;
  const double det = g1 * g2 - g3 * g3;
  check_measurement(g1, g2, det);

  Eigen::Matrix2d k11, k22, k12;
  k11 << (1.0 - t) * g2, s * g3, s * g3, t * g1;
  k22 << t * g2, -s * g3, -s * g3, (1.0 - t) * g1;
  k12 << -s * g2, (1.0 - t) * g3, -t * g3, s * g1;

  const Matrix8d correction = b.C1 * k11 * b.C1.transpose() + b.C2 * k22 * b.C2.transpose() +
                              b.C1 * k12 * b.C2.transpose() + b.C2 * k12.transpose() * b.C1.transpose();
  const Matrix8d v = b.A - correction / det;

  const double asym = (v - v.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(v.cwiseAbs().maxCoeff(), 1e-300)) {
    throw NumericError("conditioned CM asymmetry " + std::to_string(asym) + " above 1e-10");
  }
  Eigen::Matrix2d gamma;
  gamma << g1, g3, g3, g2;
  SwapResult r{CovarianceMatrix(0.5 * (v + v.transpose()), SwapBlocks::matter_labels()), gamma, {}, asym};
  const auto& labels = SwapBlocks::matter_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      r.pair_negativities[labels[i] + "," + labels[j]] = remote_log_negativity(r.conditioned, labels[i], labels[j]);
    }
  }
  return r;
}

CovarianceMatrix general_dyne_oracle(const SwapBlocks& b) {
  check_transmissivity(b.transmissivity);
  const Matrix12d bs = beam_splitter(b.transmissivity);
  const Matrix12d w = bs * b.full().matrix() * bs.transpose();

  const Eigen::Matrix4d optics = w.bottomRightCorner<4, 4>();
  const Eigen::Matrix<double, 8, 4> cross = w.topRightCorner<8, 4>();
  Eigen::Matrix4d projector = Eigen::Matrix4d::Zero();
  projector(kMeasuredP1 - 8, kMeasuredP1 - 8) = 1.0;
  projector(kMeasuredX2 - 8, kMeasuredX2 - 8) = 1.0;

  const double gx = optics(kMeasuredX2 - 8, kMeasuredX2 - 8);
  const double gp = optics(kMeasuredP1 - 8, kMeasuredP1 - 8);
  const double gxp = optics(kMeasuredX2 - 8, kMeasuredP1 - 8);
  check_measurement(gx, gp, gx * gp - gxp * gxp);

  const Eigen::Matrix4d projected = projector * optics * projector;
  const Eigen::Matrix4d pinv = projected.completeOrthogonalDecomposition().pseudoInverse();
  Matrix8d v = w.topLeftCorner<8, 8>() - cross * pinv * cross.transpose();
  v = 0.5 * (v + v.transpose()).eval();
  return CovarianceMatrix(v, SwapBlocks::matter_labels());
}

McEstimate mc_homodyne_oracle(const SwapBlocks& b, long samples, std::uint64_t seed) {
  if (samples < 16) throw ConfigError("Monte-Carlo oracle needs at least 16 samples");
  check_transmissivity(b.transmissivity);
  const Matrix12d cov = b.full().matrix();

  Matrix12d root;
  Eigen::LLT<Matrix12d> llt(cov);
  if (llt.info() == Eigen::Success) {
    root = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix12d> eig(cov);
    root = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  const Matrix12d map = beam_splitter(b.transmissivity) * root;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  using Vector10d = Eigen::Matrix<double, 10, 1>;
  using Matrix10d = Eigen::Matrix<double, 10, 10>;
  Matrix10d moments = Matrix10d::Zero();
  Eigen::Matrix<double, 12, 1> z;
  Vector10d y;
  for (long n = 0; n < samples; ++n) {
    for (int i = 0; i < 12; ++i) z(i) = normal(rng);
    const Eigen::Matrix<double, 12, 1> u = map * z;
    y.head<8>() = u.head<8>();
    y(8) = u(kMeasuredP1);
    y(9) = u(kMeasuredX2);
    moments.selfadjointView<Eigen::Lower>().rankUpdate(y);
  }
  Matrix10d s = moments.selfadjointView<Eigen::Lower>();
  s /= static_cast<double>(samples);

  // Residual covariance of the least-squares regression on the outcomes:
  // the sample version of the Gaussian conditional covariance.
  const Eigen::Matrix2d smm = s.bottomRightCorner<2, 2>();
  const Matrix82d sam = s.topRightCorner<8, 2>();
  Matrix8d cond = s.topLeftCorner<8, 8>() - sam * smm.inverse() * sam.transpose();
  cond = 0.5 * (cond + cond.transpose()).eval();

  Eigen::MatrixXd se(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      se(i, j) = std::sqrt((cond(i, i) * cond(j, j) + cond(i, j) * cond(i, j)) / static_cast<double>(samples));
    }
  }
  return McEstimate{CovarianceMatrix(cond, SwapBlocks::matter_labels()), se, samples};
}

double remote_log_negativity(const CovarianceMatrix& conditioned, std::string_view first,
                             std::string_view second) {
  const int i = conditioned.index_of(first);
  const int j = conditioned.index_of(second);
  if (i == j) throw StructuralError("negativity pair must name two distinct modes");
  return log_negativity(conditioned, Bipartition{{i}, {j}});
}

double remote_log_negativity(const SwapResult& r, std::string_view first, std::string_view second) {
  return remote_log_negativity(r.conditioned, first, second);
}

}  // namespace cvswap
