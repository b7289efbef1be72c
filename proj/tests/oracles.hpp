#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "cvswap/lyapunov.hpp"
#include "cvswap/node_model.hpp"
#include "cvswap/spectral.hpp"
#include "cvswap/swap.hpp"

namespace oracle {

// Frozen high-precision values (mpmath, 50 digits):
//   1/expm1(hbar * 2pi*1e7 / (kB * 0.04))
inline constexpr double kNbarMirror = 82.84747638428576;
//   pi * 299792458 / (1e-3 * 3e4)
inline constexpr double kKappaReference = 31394192.788480888;

/// Integrates dV/dt = A V + V A^T + D with classical RK4 from V = v0.
inline Eigen::MatrixXd moment_ode(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d, Eigen::MatrixXd v,
                                  double t_end, int steps) {
  const double h = t_end / steps;
  auto rhs = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd { return a * x + x * a.transpose() + d; };
  for (int s = 0; s < steps; ++s) {
    const Eigen::MatrixXd k1 = rhs(v);
    const Eigen::MatrixXd k2 = rhs(v + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = rhs(v + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = rhs(v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

/// Time-domain filter: the filtered mode obeys
///   d/dt (X_f, Y_f) = -(1/tau) (X_f, Y_f) + Omega (Y_f, -X_f)
///                     + sqrt(2/tau) (sqrt(2 kappa) (X, Y) - (X_in, Y_in)),
/// so the joint (node, filter) state is an 8-dimensional linear system whose
/// stationary CM follows from a Lyapunov equation.
inline Eigen::MatrixXd augmented_filtered_cm(const cvswap::LinearModel& m, const cvswap::FilterSpec& f) {
  const double kappa = m.derived.kappa;
  const double s = std::sqrt(2.0 / f.tau);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
  a.topLeftCorner(6, 6) = m.drift;
  a(6, 6) = -1.0 / f.tau;
  a(6, 7) = f.center;
  a(7, 6) = -f.center;
  a(7, 7) = -1.0 / f.tau;
  a(6, 4) = s * std::sqrt(2.0 * kappa);
  a(7, 5) = s * std::sqrt(2.0 * kappa);

  // White inputs (xi_p, Q_in, P_in, X_in, Y_in); the cavity inputs enter
  // both the intracavity field and the output.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(8, 5);
  b(1, 0) = 1.0;
  b(2, 1) = 1.0;
  b(3, 2) = 1.0;
  b(4, 3) = std::sqrt(2.0 * kappa);
  b(5, 4) = std::sqrt(2.0 * kappa);
  b(6, 3) = -s;
  b(7, 4) = -s;
  Eigen::VectorXd w(5);
  w << m.diffusion(1, 1), m.diffusion(2, 2), m.diffusion(3, 3), 0.5, 0.5;
  const Eigen::MatrixXd noise = b * w.asDiagonal() * b.transpose();
  const Eigen::MatrixXd v = cvswap::solve_lyapunov(a, noise);
  const std::vector<int> keep{0, 1, 2, 3, 6, 7};
  Eigen::MatrixXd out(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) out(i, j) = v(keep[i], keep[j]);
  }
  return out;
}

/// Gaussian conditioning on one quadrature at a time (Schur complement on a
/// scalar), after the beam splitter; no closed-form gamma/K algebra.
inline Eigen::MatrixXd sequential_homodyne(const cvswap::SwapBlocks& blocks) {
  Eigen::MatrixXd v = blocks.full().matrix();
  const double t = std::sqrt(blocks.transmissivity);
  const double r = std::sqrt(1.0 - blocks.transmissivity);
  Eigen::MatrixXd bs = Eigen::MatrixXd::Identity(12, 12);
  for (int q = 0; q < 2; ++q) {
    bs(8 + q, 8 + q) = t;
    bs(8 + q, 10 + q) = r;
    bs(10 + q, 8 + q) = -r;
    bs(10 + q, 10 + q) = t;
  }
  v = bs * v * bs.transpose();
  auto condition = [](const Eigen::MatrixXd& x, int k) {
    std::vector<int> keep;
    for (int i = 0; i < x.rows(); ++i) {
      if (i != k) keep.push_back(i);
    }
    Eigen::MatrixXd out(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      for (std::size_t j = 0; j < keep.size(); ++j) {
        out(i, j) = x(keep[i], keep[j]) - x(keep[i], k) * x(keep[j], k) / x(k, k);
      }
    }
    return out;
  };
  v = condition(v, 10);  // x of port 2
  v = condition(v, 9);   // p of port 1
  return v.topLeftCorner(8, 8);
}

inline double rel_diff(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

}  // namespace oracle
