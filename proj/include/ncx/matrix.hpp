#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "ncx/errors.hpp"

namespace ncx {

using MatrixC = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Unitary * diag(singulars) * adjoint(unitary). Singulars nonincreasing.
struct SvdTriple {
  MatrixC left;
  Eigen::VectorXd singulars;
  MatrixC right;

  MatrixC reconstruct() const {
    return left * singulars.asDiagonal() * right.adjoint();
  }
};

// Singular values below 1e-12 * sigma_max count as zero everywhere.
inline constexpr double kRankTolerance = 1e-12;

SvdTriple svd(const MatrixC& a);

// (sum sigma_i^p)^(1/p); quasi-norm for p < 1. Throws domain_error for p <= 0.
double schatten_norm(const MatrixC& a, double p);

inline Complex trace(const MatrixC& a) { return a.trace(); }

// PSD square root. Requires Hermitian input with eigenvalues >= -1e-10 * ||a||;
// negative eigenvalues inside that tolerance are clamped to zero.
MatrixC sqrt_psd(const MatrixC& a);

// B = Sigma^(1/2) U*, C = Sigma^(1/2) V*: adjoint(B) C = A and
// ||B||_S2^2 = ||C||_S2^2 = ||A||_S1.
std::pair<MatrixC, MatrixC> factor_unit_ball(const MatrixC& a);

// ||A||_Sp ||B||_Sq - ||AB||_Sr with 1/r = 1/p + 1/q. Never goes below
// -1e-10 * scale.
double hoelder_gap(const MatrixC& a, const MatrixC& b, double p, double q);

}  // namespace ncx
