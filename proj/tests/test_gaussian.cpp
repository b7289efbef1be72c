#include <doctest.h>

#include <cmath>
#include <random>

#include "cvswap/errors.hpp"
#include "cvswap/gaussian.hpp"
#include "cvswap/lyapunov.hpp"
#include "cvswap/node_model.hpp"
#include "cvswap/random_state.hpp"

using namespace cvswap;

namespace {

CovarianceMatrix tmsv(double r) {
  const double c = 0.5 * std::cosh(2 * r);
  const double s = 0.5 * std::sinh(2 * r);
  Eigen::Matrix4d v;
  v << c, 0, s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, -s, 0, c;
  return CovarianceMatrix(v, {"a", "b"});
}

CovarianceMatrix thermal(double s, std::string label) {
  return CovarianceMatrix(s * Eigen::Matrix2d::Identity(), {std::move(label)});
}

}  // namespace

TEST_CASE("covariance matrix construction checks shape and labels") {
  CHECK_THROWS_AS(CovarianceMatrix(Eigen::MatrixXd::Identity(3, 3), {"a"}), StructuralError);
  CHECK_THROWS_AS(CovarianceMatrix(Eigen::MatrixXd::Identity(2, 3), {"a"}), StructuralError);
  CHECK_THROWS_AS(CovarianceMatrix(Eigen::MatrixXd::Identity(4, 4), {"a"}), StructuralError);
  CHECK_THROWS_AS(CovarianceMatrix(Eigen::MatrixXd::Identity(4, 4), {"a", "a"}), StructuralError);
  const auto v = CovarianceMatrix::vacuum({"x", "y"});
  CHECK(v.index_of("y") == 1);
  CHECK_THROWS_AS(v.index_of("z"), StructuralError);
}

TEST_CASE("validate_cm flags physical and unphysical states") {
  const auto vac = validate_cm(CovarianceMatrix::vacuum({"a"}));
  CHECK(vac.physical);
  CHECK(vac.min_symplectic_eigenvalue == doctest::Approx(0.5).epsilon(1e-15));

  const auto low = validate_cm(CovarianceMatrix(0.25 * Eigen::Matrix2d::Identity(), {"a"}));
  CHECK_FALSE(low.physical);

  Eigen::Matrix2d asym;
  asym << 1, 0.1, 0.2, 1;
  CHECK_FALSE(validate_cm(CovarianceMatrix(asym, {"a"})).symmetric);

  Eigen::Matrix2d bad = Eigen::Matrix2d::Identity();
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(validate_cm(CovarianceMatrix(bad, {"a"})), NumericError);

  // Stationary state of the reference node.
  const auto report = validate_cm(lyapunov_cm(build_node(NodeParams::reference())));
  CHECK(report.physical);
}

TEST_CASE("symplectic spectrum of simple states") {
  auto spec = symplectic_spectrum(CovarianceMatrix::vacuum({"a", "b"}));
  REQUIRE(spec.size() == 2);
  CHECK(spec[0] == doctest::Approx(0.5));
  CHECK(spec[1] == doctest::Approx(0.5));

  Eigen::Matrix2d squeezed = Eigen::Vector2d(2.0, 1.0 / 8.0).asDiagonal();
  spec = symplectic_spectrum(CovarianceMatrix(squeezed, {"a"}));
  CHECK(spec[0] == doctest::Approx(0.5).epsilon(1e-14));

  spec = symplectic_spectrum(thermal(1.5, "a"));
  CHECK(spec[0] == doctest::Approx(1.5).epsilon(1e-14));

  // Descending order.
  spec = symplectic_spectrum(direct_sum(thermal(0.7, "a"), thermal(2.5, "b")));
  CHECK(spec[0] == doctest::Approx(2.5));
  CHECK(spec[1] == doctest::Approx(0.7));
}

TEST_CASE("partial transpose flips side-b momenta and is an involution") {
  const auto vac = CovarianceMatrix::vacuum({"a", "b"});
  CHECK(partial_transpose(vac, {{0}, {1}}).matrix() == vac.matrix());

  Eigen::Matrix4d v = 2.0 * Eigen::Matrix4d::Identity();
  v(0, 2) = v(2, 0) = 0.3;
  v(1, 3) = v(3, 1) = 0.4;
  const auto pt = partial_transpose(CovarianceMatrix(v, {"a", "b"}), {{0}, {1}});
  CHECK(pt.matrix()(0, 2) == 0.3);
  CHECK(pt.matrix()(1, 3) == -0.4);
  CHECK(pt.matrix()(3, 3) == 2.0);

  std::mt19937_64 rng(7);
  const auto r = random_gaussian_state({"a", "b", "c"}, rng);
  const Bipartition part{{0}, {1, 2}};
  CHECK(partial_transpose(partial_transpose(r, part), part).matrix() == r.matrix());

  CHECK_THROWS_AS(partial_transpose(r, {{0, 1}, {1}}), StructuralError);
  CHECK_THROWS_AS(partial_transpose(r, {{0}, {5}}), StructuralError);
}

TEST_CASE("log negativity examples") {
  const Bipartition ab{{0}, {1}};
  CHECK(log_negativity(CovarianceMatrix::vacuum({"a", "b"}), ab) == 0.0);
  CHECK(log_negativity(direct_sum(thermal(1.2, "a"), thermal(3.0, "b")), ab) == 0.0);

  // eta_- = e^{-2r}/2, so E_N = 2r.
  const auto s = tmsv(0.5);
  CHECK(std::abs(log_negativity(s, ab) - 1.0) < 1e-9);
  CHECK(std::abs(log_negativity_spectral(s, ab) - 1.0) < 1e-9);

  // Inside a larger CM the other modes are traced out first.
  const auto big = direct_sum(s, CovarianceMatrix::vacuum({"c"}));
  CHECK(std::abs(log_negativity(big, {{1}, {0}}) - 1.0) < 1e-9);
  CHECK_THROWS_AS(log_negativity(big, {{0, 2}, {1}}), StructuralError);

  // An unphysical "CM" that violates sigma^2 >= 4 det V.
  Eigen::Matrix4d bad = Eigen::Matrix4d::Zero();
  bad(0, 0) = bad(1, 1) = 1.0;
  bad(2, 2) = bad(3, 3) = -1.0;
  bad(0, 2) = bad(2, 0) = 3.0;
  CHECK_THROWS_AS(log_negativity(CovarianceMatrix(bad, {"a", "b"}), ab), NumericError);
}

TEST_CASE("closed-form negativity equals the symplectic-spectrum route on random states") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int entangled = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto v = random_gaussian_state({"a", "b"}, rng, 1.2);
    REQUIRE(validate_cm(v).physical);
    const double closed = log_negativity(v, {{0}, {1}});
    const double general = log_negativity_spectral(v, {{0}, {1}});
    worst = std::max(worst, std::abs(closed - general));
    entangled += closed > 0.0;
  }
  CHECK(worst < 1e-9);
  CHECK(entangled > 100);  // the sample exercises the entangled branch
}

TEST_CASE("negativity is invariant under local symplectic maps") {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const auto v = random_gaussian_state({"a", "b"}, rng, 1.0);
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s.topLeftCorner<2, 2>() = random_symplectic(1, rng, 1.0);
    s.bottomRightCorner<2, 2>() = random_symplectic(1, rng, 1.0);
    const CovarianceMatrix w(s * v.matrix() * s.transpose(), {"a", "b"});
    worst = std::max(worst, std::abs(log_negativity(w, {{0}, {1}}) - log_negativity(v, {{0}, {1}})));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("random symplectic matrices preserve the symplectic form") {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 4, 6}) {
    const Eigen::MatrixXd s = random_symplectic(n, rng);
    const Eigen::MatrixXd omega = symplectic_form(n);
    CHECK((s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("reduce_modes") {
  std::mt19937_64 rng(3);
  const auto v = random_gaussian_state({"a", "b", "c"}, rng);
  const std::vector<int> all{0, 1, 2};
  CHECK(reduce_modes(v, all).matrix() == v.matrix());

  const auto block = direct_sum(thermal(1.5, "x"), thermal(2.5, "y"));
  const std::vector<int> first{0};
  CHECK(reduce_modes(block, first).matrix() == 1.5 * Eigen::Matrix2d::Identity());

  const std::vector<int> outer{2, 0};
  const std::vector<int> inner{1};
  const auto twice = reduce_modes(reduce_modes(v, outer), inner);
  const std::vector<int> composed{0};
  CHECK(twice.matrix() == reduce_modes(v, composed).matrix());
  CHECK(twice.labels() == std::vector<std::string>{"a"});

  const std::vector<int> none;
  const std::vector<int> dup{1, 1};
  const std::vector<int> out_of_range{3};
  CHECK_THROWS_AS(reduce_modes(v, none), StructuralError);
  CHECK_THROWS_AS(reduce_modes(v, dup), StructuralError);
  CHECK_THROWS_AS(reduce_modes(v, out_of_range), StructuralError);
}

TEST_CASE("direct_sum") {
  const auto vv = direct_sum(CovarianceMatrix::vacuum({"a"}), CovarianceMatrix::vacuum({"b"}));
  CHECK(vv.matrix() == 0.5 * Eigen::Matrix4d::Identity());
  CHECK(vv.labels() == std::vector<std::string>{"a", "b"});

  std::mt19937_64 rng(11);
  const auto v1 = random_gaussian_state({"a", "b"}, rng);
  const auto v2 = random_gaussian_state({"c"}, rng);
  const auto sum = direct_sum(v1, v2);
  CHECK(sum.matrix().determinant() ==
        doctest::Approx(v1.matrix().determinant() * v2.matrix().determinant()).epsilon(1e-10));

  auto spec = symplectic_spectrum(sum);
  auto expected = symplectic_spectrum(v1);
  const auto second = symplectic_spectrum(v2);
  expected.insert(expected.end(), second.begin(), second.end());
  std::sort(expected.begin(), expected.end(), std::greater<>());
  for (std::size_t i = 0; i < spec.size(); ++i) CHECK(spec[i] == doctest::Approx(expected[i]).epsilon(1e-10));

  // Reducing to one summand recovers it.
  const std::vector<int> tail{2};
  CHECK(reduce_modes(sum, tail).matrix() == v2.matrix());

  CHECK_THROWS_AS(direct_sum(v1, v1), StructuralError);
}
