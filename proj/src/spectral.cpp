#include "cvswap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cvswap/errors.hpp"
#include "cvswap/quadrature.hpp"

namespace cvswap {

namespace {

using cd = std::complex<double>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix6cd resolvent(const Matrix6d& drift, double omega) {
  Matrix6cd op = drift.cast<cd>();
  op.diagonal().array() += cd(0.0, omega);
  return op.partialPivLu().inverse();
}

// Real-linear action of a_f(w) = F(w) a_out(w) on the (X, Y) quadratures.
Eigen::Matrix2cd filter_block(const FilterSpec& f, double omega) {
  const cd fp = filter_response(f, omega);
  const cd fm = std::conj(filter_response(f, -omega));
  const cd re = 0.5 * (fp + fm);
  const cd im = (fp - fm) / cd(0.0, 2.0);
  Eigen::Matrix2cd block;
  block << re, -im, im, re;
  return block;
}

void push_ladder(std::vector<double>& cuts, double centre, double width, double limit) {
  cuts.push_back(centre);
  if (!(width > 0.0)) return;
  for (double step = width; step < limit; step *= 4.0) {
    cuts.push_back(centre + step);
    if (centre - step > 0.0) cuts.push_back(centre - step);
  }
}

void require_stable(const LinearModel& m) {
  const auto report = check_stability(m);
  if (!report.stable) throw StabilityError("drift matrix is not stable", report.max_real_part);
}

QuadratureSpec merged_spec(const LinearModel& m, const FilterSpec* f, const QuadratureSpec& q) {
  QuadratureSpec spec = default_quadrature(m, f, q.rel_tol);
  if (q.half_width > 0.0) spec.half_width = q.half_width;
  spec.breakpoints.insert(spec.breakpoints.end(), q.breakpoints.begin(), q.breakpoints.end());
  spec.max_panels = q.max_panels;
  if (!(spec.rel_tol > 0.0 && spec.rel_tol <= 1e-3)) {
    throw ConfigError("quadrature tolerance must lie in (0, 1e-3]");
  }
  return spec;
}

template <class Kernel>
FilteredCm integrate_cm(Kernel kernel, const QuadratureSpec& spec, std::vector<std::string> labels) {
  auto folded = [&](double w) -> Matrix6cd { return (kernel(w) + kernel(-w)) / kTwoPi; };
  QuadratureOptions opt;
  opt.rel_tol = spec.rel_tol;
  opt.max_panels = spec.max_panels;
  const auto res = integrate_half_line<Matrix6cd>(folded, spec.half_width, spec.breakpoints, opt);

  const Eigen::MatrixXd re = res.value.real();
  const Eigen::MatrixXd im = res.value.imag();
  if (!re.allFinite() || !im.allFinite()) throw NumericError("CM integral is not finite");
  const double scale = std::max(re.cwiseAbs().maxCoeff(), 1e-300);
  FilteredCm out{CovarianceMatrix(0.5 * (re + re.transpose()), std::move(labels))};
  out.error_estimate = res.error;
  out.imag_residue = im.cwiseAbs().maxCoeff() / scale;
  out.evaluations = res.evaluations;
  out.converged = res.converged;
  return out;
}

}  // namespace

Matrix6cd transfer_at(const Matrix6d& drift, double omega) {
  if (!drift.allFinite() || !std::isfinite(omega)) throw NumericError("transfer_at: non-finite input");
  Matrix6cd op = drift.cast<cd>();
  op.diagonal().array() += cd(0.0, omega);
  Eigen::FullPivLU<Matrix6cd> lu(op);
  if (!lu.isInvertible()) throw NumericError("i w I + A is singular");
  Matrix6cd inv = lu.inverse();
  // One refinement step keeps the residual at rounding level for ill-scaled A.
  inv += inv * (Matrix6cd::Identity() - op * inv);
  return inv;
}

std::complex<double> filter_response(const FilterSpec& f, double omega) {
  return std::sqrt(2.0 / f.tau) / cd(1.0 / f.tau, -(omega - f.center));
}

double filter_norm_numeric(const FilterSpec& f, double rel_tol) {
  using Scalar1 = Eigen::Matrix<double, 1, 1>;
  const double centre = std::abs(f.center);
  const double width = 1.0 / f.tau;
  std::vector<double> cuts{std::abs(centre - width), centre + width};
  push_ladder(cuts, centre, width, centre + 20.0 * width);
  auto density = [&](double w) {
    return Scalar1(std::norm(filter_response(f, w)) + std::norm(filter_response(f, -w)));
  };
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  return integrate_half_line<Scalar1>(density, centre + 20.0 * width, cuts, opt).value(0);
}

double output_flux(const LinearModel& m, double omega) {
  const double kappa = m.derived.kappa;
  Matrix6cd g = resolvent(m.drift, omega);
  g(4, 4) += 0.5 / kappa;
  g(5, 5) += 0.5 / kappa;
  g *= std::sqrt(2.0 * kappa);
  const Vector6d diff = m.diffusion.diagonal();
  const Eigen::Matrix<cd, 2, 6> rows = g.middleRows<2>(4);
  const Eigen::Matrix2cd sigma = rows * diff.asDiagonal() * rows.adjoint();
  return 0.5 * (sigma(0, 0).real() + sigma(1, 1).real()) + sigma(0, 1).imag() - 0.5;
}

OutputSpectrum output_spectrum(const LinearModel& m, const std::vector<double>& grid, double reference_peak) {
  require_stable(m);
  OutputSpectrum s;
  s.frequencies = grid;
  s.values.reserve(grid.size());
  double peak = 0.0;
  for (double w : grid) {
    const double v = std::max(0.0, output_flux(m, w));
    peak = std::max(peak, v);
    s.values.push_back(v);
  }
  const double norm = reference_peak > 0.0 ? reference_peak : peak;
  // Below this the flux is rounding noise of an uncoupled cavity.
  if (norm <= 1e-12) {
    s.peak_power = 0.0;
    return s;
  }
  for (double& v : s.values) v /= norm;
  s.peak_power = norm;
  return s;
}

QuadratureSpec default_quadrature(const LinearModel& m, const FilterSpec* f, double rel_tol) {
  const auto& d = m.derived;
  const double delta = std::abs(m.steady.Delta);
  double width = d.kappa;
  std::vector<double> mandatory{d.omega_m, d.omega_B, delta};
  if (f) {
    width = std::max(width, 1.0 / f->tau);
    const double c = std::abs(f->center);
    mandatory.insert(mandatory.end(), {c, c + 1.0 / f->tau, std::abs(c - 1.0 / f->tau)});
  }
  QuadratureSpec q;
  q.rel_tol = rel_tol;
  q.half_width = delta + d.omega_m + d.omega_B + 20.0 * width;
  q.half_width = std::max(q.half_width, 1.5 * *std::max_element(mandatory.begin(), mandatory.end()));
  q.breakpoints = mandatory;

  const auto report = check_stability(m);
  for (const auto& ev : report.eigenvalues) {
    push_ladder(q.breakpoints, std::abs(ev.imag()), std::abs(ev.real()), q.half_width);
  }
  if (f) push_ladder(q.breakpoints, std::abs(f->center), 1.0 / f->tau, q.half_width);
  return q;
}

FilteredCm integrate_filtered_cm(const LinearModel& m, const FilterSpec& f, const QuadratureSpec& q) {
  require_stable(m);
  if (!(f.tau > 0.0) || !std::isfinite(f.tau) || !std::isfinite(f.center)) {
    throw ConfigError("filter needs finite center and tau > 0");
  }
  const QuadratureSpec spec = merged_spec(m, &f, q);
  const double kappa = m.derived.kappa;
  const double root = std::sqrt(2.0 * kappa);
  const Vector6d diff = m.diffusion.diagonal();

  auto kernel = [&](double w) -> Matrix6cd {
    Matrix6cd t = resolvent(m.drift, w);
    t(4, 4) += 0.5 / kappa;
    t(5, 5) += 0.5 / kappa;
    const Eigen::Matrix<cd, 2, 6> optical = root * filter_block(f, w) * t.middleRows<2>(4);
    t.middleRows<2>(4) = optical;
    return t * diff.asDiagonal() * t.adjoint();
  };
  return integrate_cm(kernel, spec, filtered_labels());
}

FilteredCm filtered_node_cm(const LinearModel& m, const FilterSpec& f, const QuadratureSpec& q) {
  FilteredCm out = integrate_filtered_cm(m, f, q);
  if (!out.converged) {
    throw NonconvergenceError("filtered CM quadrature missed its tolerance", out.error_estimate);
  }
  if (out.imag_residue > 1e-8) {
    throw NumericError("filtered CM integral has imaginary residue " + std::to_string(out.imag_residue));
  }
  return out;
}

FilteredCm filtered_node_cm(const LinearModel& m, const FilterSpec& f, double rel_tol) {
  QuadratureSpec q;
  q.rel_tol = rel_tol;
  return filtered_node_cm(m, f, q);
}

FilteredCm unfiltered_quadrature_cm(const LinearModel& m, double rel_tol) {
  require_stable(m);
  QuadratureSpec q;
  q.rel_tol = rel_tol;
  const QuadratureSpec spec = merged_spec(m, nullptr, q);
  const Vector6d diff = m.diffusion.diagonal();
  auto kernel = [&](double w) -> Matrix6cd {
    const Matrix6cd t = resolvent(m.drift, w);
    return t * diff.asDiagonal() * t.adjoint();
  };
  FilteredCm out = integrate_cm(kernel, spec, intracavity_labels());
  if (!out.converged) {
    throw NonconvergenceError("intracavity CM quadrature missed its tolerance", out.error_estimate);
  }
  return out;
}

SwapBlocks assemble_two_node_blocks(const CovarianceMatrix& node_a, const CovarianceMatrix& node_b,
                                    double transmissivity) {
  auto relabel = [](const CovarianceMatrix& v, const std::string& suffix) {
    if (v.n_modes() != 3) throw StructuralError("a filtered node CM has exactly three modes");
    std::vector<int> order;
    for (const auto& label : filtered_labels()) order.push_back(v.index_of(label));
    const CovarianceMatrix sorted = reduce_modes(v, order);
    return CovarianceMatrix(sorted.matrix(), {"m" + suffix, "b" + suffix, "f" + suffix});
  };
  return SwapBlocks::from_full(direct_sum(relabel(node_a, "_A"), relabel(node_b, "_B")), transmissivity);
}

}  // namespace cvswap
