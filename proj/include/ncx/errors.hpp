#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ncx {

// Base of every library error.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (bad p, shape mismatch, non-PSD input).
struct domain_error : error {
  using error::error;
};

// Dyadic index not resolvable on the grid (j >= N or Walsh index >= 2^N).
struct resolution_error : domain_error {
  using domain_error::domain_error;
};

// Trig frequency outside the alias-free window |n| < M/2.
struct alias_error : domain_error {
  using domain_error::domain_error;
};

// LacunarySet invariant violated (k_0 < 1 or k_{j+1} <= 2 k_j).
struct lacunarity_error : domain_error {
  using domain_error::domain_error;
};

// Case 1 tail depth too small for the requested gap ladder.
struct truncation_error : domain_error {
  using domain_error::domain_error;
};

// A construction precondition on the coefficients of f failed.
// Carries every offending index.
struct hypothesis_error : error {
  std::vector<long> indices;
  hypothesis_error(const std::string& what, std::vector<long> idx)
      : error(what), indices(std::move(idx)) {}
};

// Decomposition or iteration failed to converge.
struct numerical_error : error {
  using error::error;
};

}  // namespace ncx
