#pragma once

#include <optional>

#include "json.hpp"
#include "ncx/matrix.hpp"

namespace ncx {

// Finite sequence (c_j) of d x d matrices.
struct OpSequence {
  int dim = 0;
  std::vector<MatrixC> items;

  OpSequence() = default;
  OpSequence(int d, std::vector<MatrixC> its);

  long size() const { return static_cast<long>(items.size()); }
};

struct SolveOptions {
  double tolerance = 1e-2;
  int max_iter = 360;
  unsigned long seed = 0;  // used only for restarts when the gap stays open
};

// Feasible splitting c = a + b with its objective value and a certified
// dual lower bound (dual_lower <= true splitting norm <= value).
struct SplitCertificate {
  double value = 0.0;
  OpSequence a;
  OpSequence b;
  double dual_lower = 0.0;
  long iterations = 0;
  bool converged = true;
};

// tr sqrt(sum_j c_j* c_j).
double column_norm(const OpSequence& c);
// tr sqrt(sum_j c_j c_j*).
double row_norm(const OpSequence& c);
// column_norm(a) + row_norm(b); the objective at one feasible point.
double splitting_value(const OpSequence& a, const OpSequence& b);

// Smoothed gradient descent on column_norm(a) + row_norm(c - a) with
// epsilon-continuation {1e-2, 1e-4, 1e-6} * scale^2 from a = c/2. The value
// reported is the exact objective minimized over every candidate visited,
// including the warm start when one is given, so it never exceeds
// min(column_norm(c), row_norm(c)) or the warm start's value.
SplitCertificate triple_norm_solve(const OpSequence& c, const SolveOptions& opts = {},
                                   const std::optional<OpSequence>& warm_start = {});

// Scales x into the dual unit ball and pairs it with c; always a valid lower
// bound for the splitting norm. x = 0 gives 0.
double dual_lower_bound(const OpSequence& c, const OpSequence& x);

// Exact splitting norm for scalar sequences: the l2 norm.
double scalar_oracle(const OpSequence& c);

nlohmann::ordered_json sequence_to_json(const OpSequence& c);
OpSequence sequence_from_json(const nlohmann::json& j);

}  // namespace ncx
