#pragma once

#include <random>
#include <utility>
#include <vector>

#include "ncx/factorize.hpp"
#include "ncx/matrix.hpp"
#include "ncx/opfunc.hpp"

namespace testutil {

using ncx::Complex;
using ncx::MatrixC;

inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

inline double gauss(std::mt19937_64& rng) {
  const double u = uniform01(rng);
  const double v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

inline MatrixC gmat(std::mt19937_64& rng, int d, double scale = 1.0) {
  MatrixC a(d, d);
  const double s = scale * std::numbers::sqrt2 / 2.0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) a(r, c) = Complex(s * gauss(rng), s * gauss(rng));
  }
  return a;
}

inline MatrixC unitary(std::mt19937_64& rng, int d) {
  return ncx::svd(gmat(rng, d)).left;
}

inline MatrixC psd(std::mt19937_64& rng, int d) {
  const MatrixC a = gmat(rng, d);
  return a.adjoint() * a;
}

inline double max_abs(const MatrixC& a) { return a.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const MatrixC& a, const MatrixC& b) {
  return max_abs(MatrixC(a - b));
}

inline ncx::DyadicFn random_dyadic(std::mt19937_64& rng, int d, int n_resolution) {
  ncx::DyadicFn f(d, n_resolution);
  for (long k = 0; k < f.cells(); ++k) f.values[k] = gmat(rng, d);
  return f;
}

// Band-limited trig function synthesized from explicit coefficients.
inline ncx::TrigFn synth_trig(int d, int gridsize, long bound,
                              const std::vector<std::pair<long, MatrixC>>& coeffs) {
  ncx::TrigFn f(d, gridsize, bound);
  for (long m = 0; m < f.cells(); ++m) {
    const double t = ncx::grid_point(gridsize, m);
    for (const auto& [n, c] : coeffs) {
      f.values[m] += std::polar(1.0, static_cast<double>(n) * t) * c;
    }
  }
  return f;
}

inline ncx::TrigFn random_trig(std::mt19937_64& rng, int d, int gridsize, long bound) {
  std::vector<std::pair<long, MatrixC>> coeffs;
  for (long n = -bound; n <= bound; ++n) coeffs.emplace_back(n, gmat(rng, d, 0.5));
  return synth_trig(d, gridsize, bound, coeffs);
}

template <typename Fn>
Fn scale_right(const Fn& f, const MatrixC& b) {
  Fn out = f;
  for (auto& v : out.values) v = MatrixC(v * b);
  return out;
}

inline double sup_entry(const std::vector<MatrixC>& values) {
  double m = 0.0;
  for (const MatrixC& v : values) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace testutil
