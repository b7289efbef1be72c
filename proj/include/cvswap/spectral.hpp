#pragma once

// Frequency-domain quantities of a linearized node: the transfer matrix
// M(w) = (i w I + A)^-1, the output spectrum, and the stationary CM of the
// mirror, the BEC and one causally filtered output mode.
//
// Fourier convention f(w) = int f(t) e^{i w t} dt; CM integrals carry dw/2pi.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cvswap/gaussian.hpp"
#include "cvswap/node_model.hpp"
#include "cvswap/swap.hpp"

namespace cvswap {

using Matrix6cd = Eigen::Matrix<std::complex<double>, 6, 6>;

/// Filter F(t) = sqrt(2/tau) exp(-(1/tau + i Omega) t) for t >= 0.
struct FilterSpec {
  double center = 0.0;  // Omega, rad/s
  double tau = 1.0;     // inverse bandwidth, s

  static FilterSpec from_epsilon(double center, double epsilon, double omega_m) {
    return FilterSpec{center, epsilon / omega_m};
  }
  double epsilon(double omega_m) const { return omega_m * tau; }
};

struct QuadratureSpec {
  double half_width = 0.0;  // core window W; 0 selects the default
  double rel_tol = 1e-6;
  std::vector<double> breakpoints;  // extra mandatory cuts, rad/s
  int max_panels = 20000;
};

/// Throws NumericError if i w I + A is singular.
Matrix6cd transfer_at(const Matrix6d& drift, double omega);
inline Matrix6cd transfer_at(const LinearModel& m, double omega) { return transfer_at(m.drift, omega); }

/// F(w) = sqrt(2/tau) / (1/tau - i (w - Omega)).
std::complex<double> filter_response(const FilterSpec& f, double omega);

/// int |F(w)|^2 dw by the adaptive quadrature; 2 pi for a normalized filter.
double filter_norm_numeric(const FilterSpec& f, double rel_tol = 1e-10);

/// Normal-ordered photon flux of the full output field at frequency w
/// (unnormalized; units of quanta per unit bandwidth).
double output_flux(const LinearModel& m, double omega);

struct OutputSpectrum {
  std::vector<double> frequencies;  // rad/s
  std::vector<double> values;       // normalized to unit maximum
  double peak_power = 0.0;          // normalization constant (raw maximum)
};

/// Output spectrum on `grid`, divided by its maximum. If `reference_peak`
/// is positive it is used instead, so several spectra can share a scale.
/// A spectrum that vanishes identically is returned as zeros with
/// peak_power 0. StabilityError for an unstable model.
OutputSpectrum output_spectrum(const LinearModel& m, const std::vector<double>& grid,
                               double reference_peak = 0.0);

/// Window W and breakpoints the CM integrals use for this model and filter.
QuadratureSpec default_quadrature(const LinearModel& m, const FilterSpec* f, double rel_tol = 1e-6);

struct FilteredCm {
  CovarianceMatrix cm;
  double error_estimate = 0.0;  // summed absolute quadrature error, max-abs over entries
  double imag_residue = 0.0;    // max |Im V| / max |Re V| before discarding
  int evaluations = 0;
  bool converged = false;
};

/// Stationary CM of (mirror, bec, output) without throwing on quadrature
/// non-convergence; the caller inspects `converged`.
FilteredCm integrate_filtered_cm(const LinearModel& m, const FilterSpec& f, const QuadratureSpec& q);

/// As above, but NonconvergenceError (carrying the achieved error) if the
/// tolerance is missed and NumericError if the imaginary residue exceeds 1e-8.
FilteredCm filtered_node_cm(const LinearModel& m, const FilterSpec& f, const QuadratureSpec& q);
FilteredCm filtered_node_cm(const LinearModel& m, const FilterSpec& f, double rel_tol = 1e-6);

/// The same integral with the filter replaced by the identity and P by zero;
/// it must equal lyapunov_cm(m). Labels: mirror, bec, cavity.
FilteredCm unfiltered_quadrature_cm(const LinearModel& m, double rel_tol = 1e-6);

/// Labels of a filtered node CM.
inline const std::vector<std::string>& filtered_labels() {
  static const std::vector<std::string> labels{"mirror", "bec", "output"};
  return labels;
}

/// Direct sum of two independent filtered node CMs rearranged into swap
/// blocks. StructuralError unless each input carries exactly the labels
/// mirror, bec, output.
SwapBlocks assemble_two_node_blocks(const CovarianceMatrix& node_a, const CovarianceMatrix& node_b,
                                    double transmissivity = 0.5);

}  // namespace cvswap
