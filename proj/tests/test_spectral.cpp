#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvswap/errors.hpp"
#include "cvswap/experiment.hpp"
#include "cvswap/quadrature.hpp"
#include "cvswap/spectral.hpp"
#include "oracles.hpp"

using namespace cvswap;

namespace {

LinearModel reference_node() { return build_node(NodeParams::reference()); }

LinearModel decoupled_node() {
  NodeParams p = NodeParams::reference();
  p.couplings.mirror = 0.0;
  p.couplings.bec = 0.0;
  return build_node(p);
}

}  // namespace

TEST_CASE("transfer matrix") {
  const LinearModel m = reference_node();
  for (double w : {0.0, 0.3e7, -6e7, 2e8}) {
    const Matrix6cd t = transfer_at(m, w);
    const Matrix6cd lhs = (std::complex<double>(0, w) * Matrix6cd::Identity() + m.drift.cast<std::complex<double>>()) * t;
    CHECK((lhs - Matrix6cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((transfer_at(m, -w) - t.conjugate()).cwiseAbs().maxCoeff() < 1e-12 * t.cwiseAbs().maxCoeff());
  }
  // Decoupled cavity: a single Lorentzian resolvent.
  const LinearModel d = decoupled_node();
  const double kappa = d.derived.kappa;
  const std::complex<double> z(kappa, 0.0);
  const Matrix6cd t0 = transfer_at(d, 0.0);
  CHECK(std::abs(t0(4, 4) - (-kappa / (kappa * kappa + d.steady.Delta * d.steady.Delta))) < 1e-20);
  (void)z;

  Matrix6d singular = Matrix6d::Zero();
  CHECK_THROWS_AS(transfer_at(singular, 0.0), NumericError);
  CHECK_THROWS_AS(transfer_at(m.drift, std::nan("")), NumericError);
}

TEST_CASE("filter response and normalization") {
  const FilterSpec f = FilterSpec::from_epsilon(-1e7, 10.0, 1e7);
  CHECK(f.tau == doctest::Approx(1e-6));
  CHECK(f.epsilon(1e7) == doctest::Approx(10.0));
  CHECK(std::norm(filter_response(f, f.center)) == doctest::Approx(2.0 * f.tau));
  CHECK(std::norm(filter_response(f, f.center + 1.0 / f.tau)) == doctest::Approx(f.tau));
  for (const FilterSpec& g : {f, FilterSpec{0.0, 1e-3}, FilterSpec{6e7, 3e-8}, FilterSpec{-2e7, 5e-6}}) {
    CHECK(filter_norm_numeric(g) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-9));
  }
}

TEST_CASE("output spectrum") {
  const double wm = NodeParams::reference().mirror_freq;
  std::vector<double> grid;
  for (int i = -150; i <= 150; ++i) grid.push_back(i * 0.01 * wm);

  SUBCASE("decoupled cavity emits no photons") {
    const OutputSpectrum s = output_spectrum(decoupled_node(), grid);
    CHECK(s.peak_power == 0.0);
    for (double v : s.values) CHECK(std::abs(v) < 1e-12);
  }
  SUBCASE("reference node: four sidebands, normalized") {
    const OutputSpectrum s = output_spectrum(reference_node(), grid);
    CHECK(s.peak_power > 0.0);
    double top = 0.0;
    for (double v : s.values) {
      CHECK(v >= 0.0);
      top = std::max(top, v);
    }
    CHECK(top == doctest::Approx(1.0));
    const auto peaks = local_maxima(s.values);
    REQUIRE(peaks.size() == 4);
    // Two on each side of the carrier, mirrored in |omega| within one step.
    CHECK(grid[peaks[0]] < 0.0);
    CHECK(grid[peaks[1]] < 0.0);
    CHECK(grid[peaks[2]] > 0.0);
    CHECK(grid[peaks[3]] > 0.0);
    CHECK(std::abs(grid[peaks[0]] + grid[peaks[3]]) <= 0.01 * wm * 1.0001);
    CHECK(std::abs(grid[peaks[1]] + grid[peaks[2]]) <= 0.01 * wm * 1.0001);
  }
  SUBCASE("common normalization") {
    const LinearModel m = reference_node();
    const OutputSpectrum a = output_spectrum(m, grid);
    const OutputSpectrum b = output_spectrum(m, grid, 2.0 * a.peak_power);
    CHECK(b.peak_power == doctest::Approx(2.0 * a.peak_power));
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(b.values[i] == doctest::Approx(0.5 * a.values[i]));
  }
  SUBCASE("unstable model") {
    NodeParams p = NodeParams::reference();
    p.detuning = EffectiveDetuning{-wm};
    CHECK_THROWS_AS(output_spectrum(build_node(p), grid), StabilityError);
  }
}

TEST_CASE("identity-filter integral equals the Lyapunov CM") {
  const LinearModel m = reference_node();
  const FilteredCm q = unfiltered_quadrature_cm(m);
  CHECK(q.converged);
  CHECK(q.cm.labels() == intracavity_labels());
  CHECK(oracle::rel_diff(q.cm.matrix(), lyapunov_cm(m).matrix()) < 1e-6);
}

TEST_CASE("filtered CM matches the time-domain filter oracle") {
  const LinearModel m = reference_node();
  const double wm = m.derived.omega_m;
  const double wb = m.derived.omega_B;
  for (const FilterSpec& f : {FilterSpec::from_epsilon(-wm, 10.0, wm), FilterSpec::from_epsilon(-wb, 10.0, wm),
                              FilterSpec::from_epsilon(-wm, 1.0, wm), FilterSpec::from_epsilon(0.3 * wm, 50.0, wm),
                              FilterSpec::from_epsilon(-1.4 * wm, 3.0, wm)}) {
    const FilteredCm got = filtered_node_cm(m, f);
    CHECK(got.converged);
    CHECK(got.cm.labels() == filtered_labels());
    CHECK(got.imag_residue < 1e-8);
    CHECK(oracle::rel_diff(got.cm.matrix(), oracle::augmented_filtered_cm(m, f)) < 1e-6);
    CHECK(validate_cm(got.cm, kLooseTolerance).physical);
  }
}

TEST_CASE("decoupled node: thermal matter, vacuum output") {
  const LinearModel m = decoupled_node();
  const FilteredCm got = filtered_node_cm(m, FilterSpec::from_epsilon(-m.derived.omega_m, 10.0, m.derived.omega_m));
  const double nm = m.derived.nbar_m + 0.5;
  const double nc = m.derived.n_c + 0.5;
  CHECK((got.cm.block(0, 0) - nm * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-6 * nm);
  CHECK((got.cm.block(1, 1) - nc * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((got.cm.block(2, 2) - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("reference node: matter modes entangled with their Stokes sidebands") {
  const LinearModel m = reference_node();
  const double wm = m.derived.omega_m;
  const Bipartition mirror_out{{0}, {2}};
  const Bipartition bec_out{{1}, {2}};
  const auto at_mirror = filtered_node_cm(m, FilterSpec::from_epsilon(-wm, 10.0, wm)).cm;
  const auto at_bec = filtered_node_cm(m, FilterSpec::from_epsilon(-m.derived.omega_B, 10.0, wm)).cm;
  CHECK(log_negativity(at_mirror, mirror_out) > 0.0);
  CHECK(log_negativity(at_bec, bec_out) > 0.0);
}

TEST_CASE("quadrature tolerance and failure handling") {
  const LinearModel m = reference_node();
  const FilterSpec f = FilterSpec::from_epsilon(-m.derived.omega_m, 10.0, m.derived.omega_m);
  const FilteredCm coarse = filtered_node_cm(m, f, 1e-5);
  const FilteredCm fine = filtered_node_cm(m, f, 5e-6);
  CHECK(oracle::rel_diff(coarse.cm.matrix(), fine.cm.matrix()) < 1e-5);
  CHECK(fine.evaluations >= coarse.evaluations);

  const FilteredCm plain = integrate_filtered_cm(m, f, default_quadrature(m, &f));
  CHECK(plain.converged);
  CHECK_THROWS_AS(filtered_node_cm(m, f, 0.1), ConfigError);
  CHECK_THROWS_AS(filtered_node_cm(m, FilterSpec{0.0, -1.0}), ConfigError);
}

TEST_CASE("two-node block assembly") {
  const LinearModel m = reference_node();
  const double wm = m.derived.omega_m;
  const auto a = filtered_node_cm(m, FilterSpec::from_epsilon(-wm, 10.0, wm)).cm;
  const auto b = filtered_node_cm(m, FilterSpec::from_epsilon(-m.derived.omega_B, 10.0, wm)).cm;
  const SwapBlocks blocks = assemble_two_node_blocks(a, b, 0.3);
  CHECK(blocks.transmissivity == 0.3);
  CHECK(blocks.Dx.isZero());
  CHECK(blocks.A.block<4, 4>(0, 4).isZero());
  CHECK(blocks.C1.bottomRows<4>().isZero());
  CHECK(blocks.C2.topRows<4>().isZero());
  CHECK(blocks.B1 == a.block(2, 2));
  CHECK(blocks.B2 == b.block(2, 2));
  const CovarianceMatrix full = blocks.full();
  CHECK(full.labels() == SwapBlocks::all_labels());
  CHECK((full.matrix() - full.matrix().transpose()).isZero());
  const SwapBlocks again = SwapBlocks::from_full(full, 0.3);
  CHECK(again.full().matrix() == full.matrix());

  const CovarianceMatrix wrong(a.matrix(), {"mirror", "bec", "cavity"});
  CHECK_THROWS_AS(assemble_two_node_blocks(wrong, b), StructuralError);
  CHECK_THROWS_AS(assemble_two_node_blocks(a, lyapunov_cm(m)), StructuralError);
}

TEST_CASE("half-line quadrature") {
  using Scalar = Eigen::Matrix<double, 1, 1>;
  auto lorentz = [](double w) { return Scalar::Constant(1.0 / (1.0 + (w - 50.0) * (w - 50.0))); };
  const double exact = std::numbers::pi / 2.0 + std::atan(50.0);
  const auto good = integrate_half_line<Scalar>(lorentz, 100.0, {50.0}, QuadratureOptions{1e-10});
  CHECK(good.converged);
  CHECK(good.value(0) == doctest::Approx(exact).epsilon(1e-10));

  auto decay = [](double w) { return Scalar::Constant(std::exp(-w)); };
  CHECK(integrate_half_line<Scalar>(decay, 5.0, {}, QuadratureOptions{1e-10}).value(0) ==
        doctest::Approx(1.0).epsilon(1e-10));

  // An unresolved narrow peak with a tiny panel budget does not converge.
  auto spike = [](double w) { return Scalar::Constant(1e-6 / (1e-12 + (w - 37.3) * (w - 37.3))); };
  QuadratureOptions starved{1e-8};
  starved.max_panels = 4;
  const auto bad = integrate_half_line<Scalar>(spike, 100.0, {}, starved);
  CHECK_FALSE(bad.converged);
  CHECK(bad.error > 0.0);
}
