#include "ncx/opfunc.hpp"

#include <cmath>
#include <numbers>

namespace ncx {

namespace {

void check_dim(int d) {
  if (d < 1) throw domain_error("dimension must be positive");
}

void check_same_shape(int du, long nu, int dv, long nv) {
  if (du != dv || nu != nv) throw domain_error("mismatched function shapes");
}

template <typename Fn>
double l1_impl(const Fn& f) {
  double acc = 0.0;
  for (const MatrixC& v : f.values) acc += schatten_norm(v, 1.0);
  return acc / static_cast<double>(f.cells());
}

template <typename Fn>
MatrixC partial_impl(const Fn& u, const Fn& v) {
  check_same_shape(u.dim, u.cells(), v.dim, v.cells());
  MatrixC acc = MatrixC::Zero(u.dim, u.dim);
  for (long k = 0; k < u.cells(); ++k) acc += v.values[k].adjoint() * u.values[k];
  return acc / static_cast<double>(u.cells());
}

template <typename Fn>
std::vector<MatrixC> product_values(const Fn& u, const Fn& v, ProductMode mode) {
  check_same_shape(u.dim, u.cells(), v.dim, v.cells());
  std::vector<MatrixC> out;
  out.reserve(u.values.size());
  for (long k = 0; k < u.cells(); ++k) {
    out.push_back(mode == ProductMode::adjoint_left
                      ? MatrixC(v.values[k].adjoint() * u.values[k])
                      : MatrixC(u.values[k] * v.values[k]));
  }
  return out;
}

}  // namespace

DyadicFn::DyadicFn(int d, int n_resolution) : dim(d), resolution(n_resolution) {
  check_dim(d);
  if (n_resolution < 0 || n_resolution > 30) throw domain_error("bad resolution");
  values.assign(cells(), MatrixC::Zero(d, d));
}

DyadicFn::DyadicFn(int d, int n_resolution, std::vector<MatrixC> vals)
    : DyadicFn(d, n_resolution) {
  if (static_cast<long>(vals.size()) != cells()) {
    throw domain_error("dyadic value count must be 2^resolution");
  }
  for (const MatrixC& v : vals) {
    if (v.rows() != d || v.cols() != d) throw domain_error("dyadic value dim mismatch");
  }
  values = std::move(vals);
}

TrigFn::TrigFn(int d, int m_gridsize, long bound)
    : dim(d), gridsize(m_gridsize), spectrum_bound(bound) {
  check_dim(d);
  if (m_gridsize < 1) throw domain_error("gridsize must be positive");
  if (bound < 0) throw domain_error("spectrum_bound must be nonnegative");
  if (gridsize <= 2 * bound) throw alias_error("gridsize must exceed 2 * spectrum_bound");
  values.assign(cells(), MatrixC::Zero(d, d));
}

TrigFn::TrigFn(int d, int m_gridsize, long bound, std::vector<MatrixC> vals)
    : TrigFn(d, m_gridsize, bound) {
  if (static_cast<long>(vals.size()) != cells()) {
    throw domain_error("trig value count must equal gridsize");
  }
  for (const MatrixC& v : vals) {
    if (v.rows() != d || v.cols() != d) throw domain_error("trig value dim mismatch");
  }
  values = std::move(vals);
}

void LacunarySet::validate() const {
  if (elements.empty()) throw lacunarity_error("lacunary set must be nonempty");
  if (elements.front() < 1) throw lacunarity_error("lacunary set requires k_0 >= 1");
  for (std::size_t j = 0; j + 1 < elements.size(); ++j) {
    if (elements[j + 1] <= 2 * elements[j]) {
      throw lacunarity_error("lacunarity violated at index " + std::to_string(j + 1) +
                             ": " + std::to_string(elements[j + 1]) +
                             " <= 2*" + std::to_string(elements[j]));
    }
  }
}

double grid_point(int gridsize, long m) {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / gridsize - std::numbers::pi;
}

int rademacher_value(int j, long cell, int n_resolution) {
  if (j < 0 || j >= n_resolution) {
    throw resolution_error("rademacher index " + std::to_string(j) +
                           " not constant on cells at resolution " +
                           std::to_string(n_resolution));
  }
  if (cell < 0 || cell >= (1L << n_resolution)) throw resolution_error("cell out of range");
  return (cell >> (n_resolution - 1 - j)) & 1 ? -1 : 1;
}

int walsh_value(long n, long cell, int n_resolution) {
  if (n < 0 || n >= (1L << n_resolution)) {
    throw resolution_error("walsh index " + std::to_string(n) +
                           " out of range at resolution " + std::to_string(n_resolution));
  }
  int v = 1;
  for (int j = 0; (1L << j) <= n; ++j) {
    if (n & (1L << j)) v *= rademacher_value(j, cell, n_resolution);
  }
  return v;
}

MatrixC walsh_coeff(const DyadicFn& f, long n) {
  if (n < 0 || n >= f.cells()) throw resolution_error("walsh_coeff index out of range");
  MatrixC acc = MatrixC::Zero(f.dim, f.dim);
  for (long k = 0; k < f.cells(); ++k) {
    acc += static_cast<double>(walsh_value(n, k, f.resolution)) * f.values[k];
  }
  return acc / static_cast<double>(f.cells());
}

MatrixC fourier_coeff(const TrigFn& f, long n) {
  if (2 * std::labs(n) >= f.gridsize) {
    throw alias_error("fourier_coeff frequency " + std::to_string(n) +
                      " outside the alias-free window of gridsize " +
                      std::to_string(f.gridsize));
  }
  MatrixC acc = MatrixC::Zero(f.dim, f.dim);
  for (long m = 0; m < f.cells(); ++m) {
    acc += std::polar(1.0, -static_cast<double>(n) * grid_point(f.gridsize, m)) *
           f.values[m];
  }
  return acc / static_cast<double>(f.cells());
}

double l1_s1_norm(const DyadicFn& f) { return l1_impl(f); }
double l1_s1_norm(const TrigFn& f) { return l1_impl(f); }

Complex l2_s2_inner(const DyadicFn& u, const DyadicFn& v) {
  return trace(partial_impl(u, v));
}
Complex l2_s2_inner(const TrigFn& u, const TrigFn& v) {
  return trace(partial_impl(u, v));
}

MatrixC partial_inner(const DyadicFn& u, const DyadicFn& v) { return partial_impl(u, v); }
MatrixC partial_inner(const TrigFn& u, const TrigFn& v) { return partial_impl(u, v); }

DyadicFn modulate(const DyadicFn& f, long walsh_index) {
  if (walsh_index < 0 || walsh_index >= f.cells()) {
    throw resolution_error("modulation index " + std::to_string(walsh_index) +
                           " out of range at resolution " + std::to_string(f.resolution));
  }
  DyadicFn out = f;
  for (long k = 0; k < f.cells(); ++k) {
    out.values[k] *= static_cast<double>(walsh_value(walsh_index, k, f.resolution));
  }
  return out;
}

TrigFn modulate(const TrigFn& f, long frequency) {
  if (2 * std::labs(frequency) >= f.gridsize) {
    throw alias_error("modulation frequency " + std::to_string(frequency) +
                      " outside the alias-free window");
  }
  TrigFn out = f;
  out.spectrum_bound =
      std::min(f.spectrum_bound + std::labs(frequency), max_alias_free(f.gridsize));
  for (long m = 0; m < f.cells(); ++m) {
    out.values[m] *= std::polar(1.0, static_cast<double>(frequency) * grid_point(f.gridsize, m));
  }
  return out;
}

DyadicFn pointwise_product(const DyadicFn& u, const DyadicFn& v, ProductMode mode) {
  return DyadicFn(u.dim, u.resolution, product_values(u, v, mode));
}

TrigFn pointwise_product(const TrigFn& u, const TrigFn& v, ProductMode mode) {
  const long bound =
      std::min(u.spectrum_bound + v.spectrum_bound, max_alias_free(u.gridsize));
  return TrigFn(u.dim, u.gridsize, bound, product_values(u, v, mode));
}

std::vector<long> spectrum_violations(const TrigFn& f) {
  const double tol = 1e-10 * (1.0 + l1_s1_norm(f));
  std::vector<long> bad;
  for (long n = -max_alias_free(f.gridsize); n <= max_alias_free(f.gridsize); ++n) {
    if (std::labs(n) <= f.spectrum_bound) continue;
    if (fourier_coeff(f, n).cwiseAbs().maxCoeff() > tol) bad.push_back(n);
  }
  return bad;
}

nlohmann::ordered_json matrix_to_json(const MatrixC& a) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      entries.push_back({a(r, c).real(), a(r, c).imag()});
    }
  }
  return entries;
}

MatrixC matrix_from_json(const nlohmann::json& j) {
  const long total = static_cast<long>(j.size());
  const long d = std::lround(std::sqrt(static_cast<double>(total)));
  if (d * d != total) throw domain_error("matrix JSON must hold d*d [re,im] pairs");
  MatrixC a(d, d);
  long i = 0;
  for (const auto& pair : j) {
    if (pair.size() != 2) throw domain_error("matrix entry must be an [re, im] pair");
    a(i / d, i % d) = Complex(pair[0].get<double>(), pair[1].get<double>());
    ++i;
  }
  return a;
}

nlohmann::ordered_json fn_to_json(const DyadicFn& f) {
  nlohmann::ordered_json j;
  j["kind"] = "dyadic";
  j["dim"] = f.dim;
  j["resolution"] = f.resolution;
  nlohmann::ordered_json vals = nlohmann::ordered_json::array();
  for (const MatrixC& v : f.values) vals.push_back(matrix_to_json(v));
  j["values"] = std::move(vals);
  return j;
}

nlohmann::ordered_json fn_to_json(const TrigFn& f) {
  nlohmann::ordered_json j;
  j["kind"] = "trig";
  j["dim"] = f.dim;
  j["gridsize"] = f.gridsize;
  j["spectrum_bound"] = f.spectrum_bound;
  nlohmann::ordered_json vals = nlohmann::ordered_json::array();
  for (const MatrixC& v : f.values) vals.push_back(matrix_to_json(v));
  j["values"] = std::move(vals);
  return j;
}

namespace {
std::vector<MatrixC> values_from_json(const nlohmann::json& j, int d) {
  std::vector<MatrixC> vals;
  for (const auto& m : j.at("values")) {
    vals.push_back(matrix_from_json(m));
    if (vals.back().rows() != d) throw domain_error("value dim mismatch in JSON");
  }
  return vals;
}
}  // namespace

DyadicFn dyadic_from_json(const nlohmann::json& j) {
  if (j.at("kind") != "dyadic") throw domain_error("expected dyadic JSON");
  const int d = j.at("dim").get<int>();
  return DyadicFn(d, j.at("resolution").get<int>(), values_from_json(j, d));
}

TrigFn trig_from_json(const nlohmann::json& j) {
  if (j.at("kind") != "trig") throw domain_error("expected trig JSON");
  const int d = j.at("dim").get<int>();
  return TrigFn(d, j.at("gridsize").get<int>(), j.at("spectrum_bound").get<long>(),
                values_from_json(j, d));
}

}  // namespace ncx
