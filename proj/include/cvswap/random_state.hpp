#pragma once

#include <random>
#include <string>
#include <vector>

#include "cvswap/gaussian.hpp"

namespace cvswap {

/// Random symplectic matrix S = O1 Z O2 (passive, single-mode squeezes with
/// |ln z| <= max_squeeze, passive), interleaved quadrature order.
Eigen::MatrixXd random_symplectic(int n_modes, std::mt19937_64& rng, double max_squeeze = 1.0);

/// Random physical Gaussian CM: a random symplectic applied to a product of
/// thermal states with symplectic eigenvalues 1/2 + Exp(1).
CovarianceMatrix random_gaussian_state(std::vector<std::string> labels, std::mt19937_64& rng,
                                       double max_squeeze = 1.0);

}  // namespace cvswap
