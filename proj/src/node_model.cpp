#include "cvswap/node_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cvswap/errors.hpp"
#include "cvswap/lyapunov.hpp"

namespace cvswap {

namespace {

constexpr double kSteadyTolerance = 1e-10;
constexpr int kFixedPointBudget = 10000;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be strictly positive and finite");
  }
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be non-negative and finite");
  }
}

double rel_gap(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Stiffness of the detuning shift: Delta = delta_c - shift * alpha^2.
double detuning_shift(const DerivedParams& d) {
  return d.g * d.g / d.omega_m + d.G * d.G / (d.Omega_c + d.omega_sw + d.gamma_c * d.gamma_c / d.Omega_c);
}

SteadyState from_photon_number(const DerivedParams& d, double n, double delta) {
  SteadyState s;
  s.alpha = std::sqrt(n);
  s.q_s = d.g * n / d.omega_m;
  s.p_s = 0.0;
  s.Q_s = -d.G * n / (d.Omega_c + d.omega_sw + d.gamma_c * d.gamma_c / d.Omega_c);
  s.P_s = d.gamma_c / d.Omega_c * s.Q_s;
  s.Delta = delta;
  s.delta_c = delta + d.g * s.q_s - d.G * s.Q_s;
  return s;
}

// Positive roots of n ((delta_c - k n)^2 + kappa^2) = E^2, ascending.
std::vector<double> photon_number_roots(double delta_c, double k, double kappa, double drive) {
  const double e2 = drive * drive;
  auto f = [&](double n) {
    const double det = delta_c - k * n;
    return n * (det * det + kappa * kappa) - e2;
  };
  if (e2 == 0.0) return {0.0};
  const double upper = e2 / (kappa * kappa);

  // f is a cubic; its critical points split [0, upper] into monotone pieces.
  std::vector<double> edges{0.0};
  if (k != 0.0) {
    const double qa = 3.0 * k * k;
    const double qb = -4.0 * k * delta_c;
    const double qc = delta_c * delta_c + kappa * kappa;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      for (double c : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
        if (c > 0.0 && c < upper) edges.push_back(c);
      }
    }
  }
  edges.push_back(upper);
  std::sort(edges.begin(), edges.end());

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i];
    double hi = edges[i + 1];
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
      roots.push_back(lo);
      continue;
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
      if (fhi == 0.0) roots.push_back(hi);
      continue;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
              roots.end());
  return roots;
}

}  // namespace

NodeParams NodeParams::reference() {
  NodeParams p;
  const double omega_m = 2.0 * std::numbers::pi * 1e7;
  p.pump_power = 50e-3;
  p.cavity_length = 1e-3;
  p.wavelength = 1080e-9;
  p.finesse = 3e4;
  p.mirror_mass = 50e-12;
  p.mirror_freq = omega_m;
  p.mirror_quality = 1e5;
  p.mirror_temp = 0.04;
  // The quoted 2 pi x 3.57 kHz recoil cannot give omega_B ~ 0.6 omega_m.
  p.bec_recoil = 0.15 * omega_m;
  p.bec_collision = 0.0;
  p.bec_damping_over_kappa = 1e-3;
  p.bec_temp = 1e-6;
  p.detuning = EffectiveDetuning{omega_m};
  p.couplings.bec = 240.0;
  return p;
}

void validate(const NodeParams& p) {
  require_nonnegative(p.pump_power, "pump_power");
  require_positive(p.cavity_length, "cavity_length");
  require_positive(p.wavelength, "wavelength");
  require_positive(p.finesse, "finesse");
  require_positive(p.mirror_mass, "mirror_mass");
  require_positive(p.mirror_freq, "mirror_freq");
  if (p.mirror_damping) {
    require_positive(*p.mirror_damping, "mirror_damping");
  } else {
    require_positive(p.mirror_quality, "mirror_quality");
  }
  require_nonnegative(p.mirror_temp, "mirror_temp");
  require_positive(p.bec_recoil, "bec_recoil");
  require_nonnegative(p.bec_collision, "bec_collision");
  if (p.bec_damping) {
    require_positive(*p.bec_damping, "bec_damping");
  } else {
    require_positive(p.bec_damping_over_kappa, "bec_damping_over_kappa");
  }
  require_nonnegative(p.bec_temp, "bec_temp");
  const double det = std::visit([](auto d) { return d.value; }, p.detuning);
  if (!std::isfinite(det)) throw ConfigError("detuning must be finite");
  if (p.couplings.mirror) require_nonnegative(*p.couplings.mirror, "mirror_coupling");
  if (p.couplings.bec) require_nonnegative(*p.couplings.bec, "bec_coupling");
}

double thermal_occupation(double omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

DerivedParams derive_params(const NodeParams& p) {
  validate(p);
  using constants::hbar;
  using constants::speed_of_light;
  DerivedParams d;
  d.kappa = std::numbers::pi * speed_of_light / (p.cavity_length * p.finesse);
  d.omega_l = 2.0 * std::numbers::pi * speed_of_light / p.wavelength;
  d.omega_c = d.omega_l;
  d.drive = std::sqrt(2.0 * d.kappa * p.pump_power / (hbar * d.omega_l));

  d.omega_m = p.mirror_freq;
  d.gamma_m = p.mirror_damping.value_or(p.mirror_freq / p.mirror_quality);
  d.gamma_c = p.bec_damping.value_or(p.bec_damping_over_kappa * d.kappa);
  d.omega_sw = p.bec_collision;
  d.detuning = p.detuning;

  d.g = p.couplings.mirror.value_or((d.omega_c / p.cavity_length) *
                                    std::sqrt(hbar / (p.mirror_mass * p.mirror_freq)));

  d.Omega_c = 4.0 * p.bec_recoil + 0.5 * p.bec_collision;
  d.omega_B = std::sqrt(d.Omega_c * (d.Omega_c + p.bec_collision));

  const auto& micro = p.microscopic;
  std::optional<double> u0 = micro.lattice_depth_per_photon;
  if (!u0 && micro.vacuum_rabi && micro.atomic_detuning) {
    if (*micro.atomic_detuning == 0.0) throw ConfigError("atomic_detuning must be non-zero");
    u0 = *micro.vacuum_rabi * *micro.vacuum_rabi / *micro.atomic_detuning;
  }
  if (micro.atom_number && u0 && *u0 != 0.0) {
    require_positive(*micro.atom_number, "atom_number");
    const double m_s = hbar * d.omega_c * d.omega_c /
                       (p.cavity_length * p.cavity_length * *micro.atom_number * *u0 * *u0 * p.bec_recoil);
    d.bec_mass = m_s;
    if (!p.couplings.bec) {
      d.G = (d.omega_c / p.cavity_length) * std::sqrt(hbar / (4.0 * p.bec_recoil * m_s));
    }
  }
  if (p.couplings.bec) {
    d.G = *p.couplings.bec;
  } else if (!d.bec_mass) {
    std::string missing;
    if (!micro.atom_number) missing += " atom_number";
    if (!u0) missing += " lattice_depth_per_photon (or vacuum_rabi + atomic_detuning)";
    if (missing.empty()) missing = " non-zero lattice_depth_per_photon";
    throw ConfigError("BEC coupling not set and microscopic inputs missing:" + missing);
  }

  d.nbar_m = thermal_occupation(p.mirror_freq, p.mirror_temp);
  d.n_c = thermal_occupation(d.omega_B, p.bec_temp);
  return d;
}

SteadyState solve_steady_state(const DerivedParams& d) {
  SteadyState s;
  if (const auto* eff = std::get_if<EffectiveDetuning>(&d.detuning)) {
    const double n = d.drive * d.drive / (eff->value * eff->value + d.kappa * d.kappa);
    s = from_photon_number(d, n, eff->value);
  } else {
    const double delta_c = std::get<BareDetuning>(d.detuning).value;
    const double k = detuning_shift(d);
    const auto roots = photon_number_roots(delta_c, k, d.kappa, d.drive);
    if (roots.empty()) throw NonconvergenceError("no steady state found for the cubic", 1.0);

    // Damped fixed-point iteration from the dark cavity; it follows the
    // ramp-up branch when it contracts. The bracketed smallest root is the
    // authority either way.
    const double e2 = d.drive * d.drive;
    double n = 0.0;
    bool converged = false;
    for (int it = 0; it < kFixedPointBudget; ++it) {
      const double det = delta_c - k * n;
      const double next = 0.5 * n + 0.5 * e2 / (det * det + d.kappa * d.kappa);
      if (std::abs(next - n) <= 1e-12 * std::max(next, 1.0)) {
        n = next;
        converged = true;
        break;
      }
      n = next;
    }
    const double branch = roots.front();
    if (!converged || std::abs(n - branch) > 1e-9 * std::max(branch, 1.0)) n = branch;
    s = from_photon_number(d, n, delta_c - k * n);
    s.delta_c = delta_c;
    s.multiplicity = static_cast<int>(roots.size());
  }
  s.residual = steady_state_residual(d, s);
  if (s.residual > kSteadyTolerance) {
    throw NonconvergenceError("steady state residual above tolerance", s.residual);
  }
  return s;
}

SteadyState steady_state_from_amplitude(const DerivedParams& d, std::complex<double> alpha) {
  if (std::abs(alpha.imag()) > 1e-12 * std::max(std::abs(alpha), 1e-300)) {
    throw StructuralError("steady-state amplitude must be real");
  }
  const double n = alpha.real() * alpha.real();
  SteadyState s;
  if (const auto* eff = std::get_if<EffectiveDetuning>(&d.detuning)) {
    s = from_photon_number(d, n, eff->value);
  } else {
    const double delta_c = std::get<BareDetuning>(d.detuning).value;
    s = from_photon_number(d, n, delta_c - detuning_shift(d) * n);
    s.delta_c = delta_c;
  }
  s.alpha = alpha.real();
  s.residual = steady_state_residual(d, s);
  return s;
}

double steady_state_residual(const DerivedParams& d, const SteadyState& s) {
  const double n = s.alpha * s.alpha;
  const double q_expected = d.g * n / d.omega_m;
  const double Q_expected = -d.G * n / (d.Omega_c + d.omega_sw + d.gamma_c * d.gamma_c / d.Omega_c);
  const double alpha_expected = d.drive / std::hypot(s.Delta, d.kappa);
  const double delta_expected = s.delta_c - d.g * s.q_s + d.G * s.Q_s;
  const double freq_scale = std::max({std::abs(s.Delta), std::abs(s.delta_c), d.kappa});
  return std::max({rel_gap(s.q_s, q_expected), std::abs(s.p_s),
                   rel_gap(s.Q_s, Q_expected), rel_gap(s.P_s, d.gamma_c / d.Omega_c * s.Q_s),
                   rel_gap(s.alpha, alpha_expected),
                   std::abs(s.Delta - delta_expected) / freq_scale});
}

Matrix6d build_drift(const DerivedParams& d, const SteadyState& s) {
  const double gm = std::sqrt(2.0) * d.g * s.alpha;
  const double gb = std::sqrt(2.0) * d.G * s.alpha;
  Matrix6d a = Matrix6d::Zero();
  a(0, 1) = d.omega_m;
  a(1, 0) = -d.omega_m;
  a(1, 1) = -d.gamma_m;
  a(1, 4) = gm;
  a(2, 2) = -d.gamma_c;
  a(2, 3) = d.Omega_c;
  a(3, 2) = -(d.Omega_c + d.omega_sw);
  a(3, 3) = -d.gamma_c;
  a(3, 4) = -gb;
  a(4, 4) = -d.kappa;
  a(4, 5) = s.Delta;
  a(5, 0) = gm;
  a(5, 2) = -gb;
  a(5, 4) = -s.Delta;
  a(5, 5) = -d.kappa;
  return a;
}

Matrix6d build_diffusion(const DerivedParams& d) {
  if (d.nbar_m < 0.0 || d.n_c < 0.0) throw StructuralError("negative thermal occupation");
  if (d.gamma_m < 0.0 || d.gamma_c < 0.0 || d.kappa < 0.0) throw StructuralError("negative damping rate");
  Matrix6d diff = Matrix6d::Zero();
  diff(1, 1) = d.gamma_m * (2.0 * d.nbar_m + 1.0);
  diff(2, 2) = d.gamma_c * (2.0 * d.n_c + 1.0);
  diff(3, 3) = d.gamma_c * (2.0 * d.n_c + 1.0);
  diff(4, 4) = d.kappa;
  diff(5, 5) = d.kappa;
  return diff;
}

LinearModel make_linear_model(const DerivedParams& d, const SteadyState& s) {
  return LinearModel{build_drift(d, s), build_diffusion(d), d, s};
}

LinearModel build_node(const NodeParams& p) {
  const DerivedParams d = derive_params(p);
  return make_linear_model(d, solve_steady_state(d));
}

StabilityReport check_stability(const Eigen::MatrixXd& drift) {
  if (!drift.allFinite()) throw NumericError("drift matrix has non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(drift, false);
  if (solver.info() != Eigen::Success) throw NumericError("drift eigen-solver failed");
  StabilityReport report;
  report.eigenvalues.assign(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](auto a, auto b) { return a.imag() < b.imag() || (a.imag() == b.imag() && a.real() < b.real()); });
  report.max_real_part = -std::numeric_limits<double>::infinity();
  for (const auto& ev : report.eigenvalues) report.max_real_part = std::max(report.max_real_part, ev.real());
  report.stable = report.max_real_part < 0.0;
  return report;
}

CovarianceMatrix lyapunov_cm(const LinearModel& m) {
  const auto stability = check_stability(m.drift);
  if (!stability.stable) {
    throw StabilityError("drift matrix is not stable; no stationary state", stability.max_real_part);
  }
  Eigen::MatrixXd v = solve_lyapunov(m.drift, m.diffusion);
  const double residual = lyapunov_relative_residual(m.drift, v, m.diffusion);
  if (residual > 1e-10) throw NumericError("Lyapunov residual " + std::to_string(residual) + " above 1e-10");
  return CovarianceMatrix(std::move(v), intracavity_labels());
}

}  // namespace cvswap
