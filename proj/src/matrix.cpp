#include "ncx/matrix.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace ncx {

SvdTriple svd(const MatrixC& a) {
  Eigen::JacobiSVD<MatrixC> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (dec.info() != Eigen::Success) {
    throw numerical_error("svd failed to converge, max entry magnitude " +
                          std::to_string(a.cwiseAbs().maxCoeff()));
  }
  return SvdTriple{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

double schatten_norm(const MatrixC& a, double p) {
  if (!(p > 0.0)) throw domain_error("schatten_norm requires p > 0");
  const Eigen::VectorXd s = svd(a).singulars;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s[i], p);
  return std::pow(acc, 1.0 / p);
}

MatrixC sqrt_psd(const MatrixC& a) {
  const double entry_scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + entry_scale)) {
    throw domain_error("sqrt_psd requires a Hermitian matrix");
  }
  Eigen::SelfAdjointEigenSolver<MatrixC> es((a + a.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) {
    throw numerical_error("eigendecomposition failed in sqrt_psd");
  }
  Eigen::VectorXd ev = es.eigenvalues();
  const double norm = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10 * norm) {
      throw domain_error("sqrt_psd input has a negative eigenvalue beyond tolerance");
    }
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

std::pair<MatrixC, MatrixC> factor_unit_ball(const MatrixC& a) {
  const SvdTriple t = svd(a);
  const Eigen::VectorXd root = t.singulars.cwiseSqrt();
  MatrixC b = root.asDiagonal() * t.left.adjoint();
  MatrixC c = root.asDiagonal() * t.right.adjoint();
  return {std::move(b), std::move(c)};
}

double hoelder_gap(const MatrixC& a, const MatrixC& b, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw domain_error("hoelder_gap requires p, q > 0");
  const double r = 1.0 / (1.0 / p + 1.0 / q);
  return schatten_norm(a, p) * schatten_norm(b, q) - schatten_norm(a * b, r);
}

}  // namespace ncx
