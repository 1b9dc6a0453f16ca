#pragma once

#include <vector>

#include "json.hpp"
#include "ncx/matrix.hpp"

namespace ncx {

// Function constant on the 2^N half-open dyadic cells of [0,1),
// cell k <-> [k/2^N, (k+1)/2^N).
struct DyadicFn {
  int dim = 0;
  int resolution = 0;
  std::vector<MatrixC> values;

  DyadicFn() = default;
  DyadicFn(int d, int n_resolution);
  DyadicFn(int d, int n_resolution, std::vector<MatrixC> vals);

  long cells() const { return 1L << resolution; }
};

// Function sampled on the discrete circle t_m = 2*pi*m/M - pi. spectrum_bound
// caps |n| of any nonzero coefficient; the grid keeps M > 2 * spectrum_bound.
struct TrigFn {
  int dim = 0;
  int gridsize = 0;
  long spectrum_bound = 0;
  std::vector<MatrixC> values;

  TrigFn() = default;
  TrigFn(int d, int m_gridsize, long bound);
  TrigFn(int d, int m_gridsize, long bound, std::vector<MatrixC> vals);

  long cells() const { return gridsize; }
};

// Strictly increasing, k_0 >= 1, k_{j+1} > 2 k_j.
struct LacunarySet {
  std::vector<long> elements;

  void validate() const;  // throws lacunarity_error
  long max_element() const { return elements.back(); }
};

inline long max_alias_free(int gridsize) { return (gridsize - 1) / 2; }
double grid_point(int gridsize, long m);

int rademacher_value(int j, long cell, int n_resolution);
int walsh_value(long n, long cell, int n_resolution);
inline long walsh_index_product(long m, long n) { return m ^ n; }

MatrixC walsh_coeff(const DyadicFn& f, long n);
MatrixC fourier_coeff(const TrigFn& f, long n);

double l1_s1_norm(const DyadicFn& f);
double l1_s1_norm(const TrigFn& f);

Complex l2_s2_inner(const DyadicFn& u, const DyadicFn& v);
Complex l2_s2_inner(const TrigFn& u, const TrigFn& v);

// <u,v>_p = mean over cells of adjoint(v) * u. Satisfies
// partial_inner(u*b, v) = partial_inner(u, v) * b.
MatrixC partial_inner(const DyadicFn& u, const DyadicFn& v);
MatrixC partial_inner(const TrigFn& u, const TrigFn& v);

DyadicFn modulate(const DyadicFn& f, long walsh_index);
TrigFn modulate(const TrigFn& f, long frequency);

enum class ProductMode { adjoint_left, plain };

// adjoint_left computes adjoint(v) * u cellwise (h*g with u = g, v = h),
// the pointwise version of partial_inner's orientation.
DyadicFn pointwise_product(const DyadicFn& u, const DyadicFn& v, ProductMode mode);
TrigFn pointwise_product(const TrigFn& u, const TrigFn& v, ProductMode mode);

// Indices inside the alias-free window whose coefficient magnitude exceeds
// 1e-10 * (1 + l1 norm) beyond the declared spectrum_bound.
std::vector<long> spectrum_violations(const TrigFn& f);

nlohmann::ordered_json matrix_to_json(const MatrixC& a);
MatrixC matrix_from_json(const nlohmann::json& j);
nlohmann::ordered_json fn_to_json(const DyadicFn& f);
nlohmann::ordered_json fn_to_json(const TrigFn& f);
DyadicFn dyadic_from_json(const nlohmann::json& j);
TrigFn trig_from_json(const nlohmann::json& j);

}  // namespace ncx
