#pragma once

// One hybrid optomechanical node: a driven cavity mode coupled by radiation
// pressure to a moving mirror and to the Bogoliubov mode of a BEC.
//
// Linearized fluctuation vector, in this order everywhere:
//   [q, p] mirror, [Q, P] Bogoliubov mode, [X, Y] cavity field.

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cvswap/gaussian.hpp"

namespace cvswap {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double boltzmann = 1.380649e-23;   // J / K
inline constexpr double speed_of_light = 299792458.0;  // m / s
}  // namespace constants

using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Effective detuning Delta = delta_c - g q_s + G Q_s, in the convention of
/// the drift matrix (Delta > 0: laser red of the cavity).
struct EffectiveDetuning {
  double value;
};
/// Bare Stark-shifted detuning delta_c; Delta is found self-consistently.
struct BareDetuning {
  double value;
};
using DetuningSpec = std::variant<EffectiveDetuning, BareDetuning>;

struct CouplingOverrides {
  std::optional<double> mirror;  // g, rad/s
  std::optional<double> bec;     // G, rad/s
};

/// Inputs for the optional microscopic derivation of the BEC coupling.
struct MicroscopicInputs {
  std::optional<double> atom_number;
  std::optional<double> lattice_depth_per_photon;  // U0, rad/s
  std::optional<double> vacuum_rabi;               // g0, rad/s
  std::optional<double> atomic_detuning;           // Delta_a, rad/s
  std::optional<double> potential_waist;           // nu, m
  std::optional<double> s_wave_length;             // a_s, m
};

struct NodeParams {
  double pump_power = 0.0;      // W
  double cavity_length = 0.0;   // m
  double wavelength = 0.0;      // m
  double finesse = 0.0;
  double mirror_mass = 0.0;     // kg
  double mirror_freq = 0.0;     // rad/s
  std::optional<double> mirror_damping;  // rad/s; default mirror_freq / mirror_quality
  double mirror_quality = 1e5;
  double mirror_temp = 0.0;     // K
  double bec_recoil = 0.0;      // rad/s
  double bec_collision = 0.0;   // omega_sw, rad/s
  std::optional<double> bec_damping;     // rad/s; default bec_damping_over_kappa * kappa
  double bec_damping_over_kappa = 1e-3;
  double bec_temp = 0.0;        // K
  DetuningSpec detuning = EffectiveDetuning{0.0};
  CouplingOverrides couplings;
  MicroscopicInputs microscopic;

  /// Calibrated reference node: 50 mW pump, 1 mm cavity at 1080 nm with
  /// finesse 3e4, 50 ng mirror at 2 pi x 10 MHz and 40 mK, BEC at 1 uK with
  /// gamma_c = 1e-3 kappa. Delta = +omega_m (red side in the drift-matrix
  /// convention). omega_R = 0.15 omega_m puts omega_B at 0.6 omega_m; the
  /// BEC coupling is fixed at G = 240 rad/s.
  static NodeParams reference();
};

/// Throws ConfigError describing the first invalid field.
void validate(const NodeParams& p);

struct DerivedParams {
  double kappa = 0.0;        // cavity amplitude decay rate, rad/s
  double omega_l = 0.0;      // laser angular frequency
  double omega_c = 0.0;      // cavity angular frequency (taken equal to omega_l)
  double drive = 0.0;        // E = sqrt(2 kappa P / hbar omega_l)
  double g = 0.0;            // mirror coupling
  double G = 0.0;            // BEC coupling
  std::optional<double> bec_mass;  // m_s, only from the microscopic path
  double Omega_c = 0.0;      // 4 omega_R + omega_sw / 2
  double omega_B = 0.0;      // sqrt(Omega_c (Omega_c + omega_sw))
  double nbar_m = 0.0;
  double n_c = 0.0;
  // Pass-through of the inputs the dynamics needs.
  double omega_m = 0.0;
  double gamma_m = 0.0;
  double gamma_c = 0.0;
  double omega_sw = 0.0;
  DetuningSpec detuning = EffectiveDetuning{0.0};
};

/// Bose occupation 1/(exp(hbar w / kB T) - 1); zero at T = 0.
double thermal_occupation(double omega, double temperature);

DerivedParams derive_params(const NodeParams& p);

struct SteadyState {
  double alpha = 0.0;   // real intracavity amplitude
  double q_s = 0.0;
  double p_s = 0.0;
  double Q_s = 0.0;
  double P_s = 0.0;
  double Delta = 0.0;   // effective detuning
  double delta_c = 0.0; // bare detuning consistent with Delta
  int multiplicity = 1; // number of fixed points at this drive
  double residual = 0.0;
};

/// Semiclassical fixed point. With an effective detuning the relations are
/// explicit; with a bare detuning the cubic in alpha^2 is solved and the
/// branch reached by ramping the drive up from zero is returned.
SteadyState solve_steady_state(const DerivedParams& d);

/// Steady state for a prescribed intracavity amplitude. The amplitude must be
/// real (the phase convention makes alpha real); StructuralError otherwise.
SteadyState steady_state_from_amplitude(const DerivedParams& d, std::complex<double> alpha);

/// Largest relative residual of the five steady-state relations.
double steady_state_residual(const DerivedParams& d, const SteadyState& s);

Matrix6d build_drift(const DerivedParams& d, const SteadyState& s);
Matrix6d build_diffusion(const DerivedParams& d);

struct LinearModel {
  Matrix6d drift;
  Matrix6d diffusion;
  DerivedParams derived;
  SteadyState steady;
};

LinearModel make_linear_model(const DerivedParams& d, const SteadyState& s);

/// derive_params -> solve_steady_state -> make_linear_model.
LinearModel build_node(const NodeParams& p);

struct StabilityReport {
  bool stable = false;
  double max_real_part = 0.0;  // rad/s
  std::vector<std::complex<double>> eigenvalues;
};

StabilityReport check_stability(const Eigen::MatrixXd& drift);
inline StabilityReport check_stability(const LinearModel& m) { return check_stability(m.drift); }

/// Mode labels used for a node's intracavity CM.
inline const std::vector<std::string>& intracavity_labels() {
  static const std::vector<std::string> labels{"mirror", "bec", "cavity"};
  return labels;
}

/// Stationary intracavity CM from A V + V A^T = -D. StabilityError if the
/// drift is not Hurwitz.
CovarianceMatrix lyapunov_cm(const LinearModel& m);

}  // namespace cvswap
