#include "ncx/factorize.hpp"

namespace ncx {

namespace {

// Per cell, from f = U Sigma V*: g = Sigma^(1/2) V*, h = Sigma^(1/2) U*.
void factor_values(const std::vector<MatrixC>& f, std::vector<MatrixC>& g,
                   std::vector<MatrixC>& h) {
  g.reserve(f.size());
  h.reserve(f.size());
  for (const MatrixC& v : f) {
    const SvdTriple t = svd(v);
    const Eigen::VectorXd root = t.singulars.cwiseSqrt();
    g.push_back(root.asDiagonal() * t.right.adjoint());
    h.push_back(root.asDiagonal() * t.left.adjoint());
  }
}

}  // namespace

FactorPair<DyadicFn> generic_factor(const DyadicFn& f) {
  std::vector<MatrixC> g, h;
  factor_values(f.values, g, h);
  return {DyadicFn(f.dim, f.resolution, std::move(g)),
          DyadicFn(f.dim, f.resolution, std::move(h))};
}

FactorPair<TrigFn> generic_factor(const TrigFn& f) {
  // Factors are not band-limited; their bound saturates the alias-free window.
  const long bound = max_alias_free(f.gridsize);
  std::vector<MatrixC> g, h;
  factor_values(f.values, g, h);
  return {TrigFn(f.dim, f.gridsize, bound, std::move(g)),
          TrigFn(f.dim, f.gridsize, bound, std::move(h))};
}

}  // namespace ncx
