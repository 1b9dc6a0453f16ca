#pragma once

#include "ncx/factorize.hpp"
#include "ncx/opfunc.hpp"
#include "ncx/seqnorm.hpp"

namespace ncx {

namespace detail {
struct SpanBuilder;
}

// Orthonormalized right-multiplication-closed subspace of discrete L2(.;S2).
//
// Closed spans generated by {chi_n * h * E_pq} consist of all matrix functions
// whose columns lie in the column space W = span{chi_n * h.col(p)}, so only an
// orthonormal basis of W (flattened to C^{cells*dim}, weighted 1/sqrt(cells))
// is stored and projections act column by column. A raw mode holding full
// matrix-function vectors exists for deliberately closure-violating test
// subspaces.
class ModuleSpan {
 public:
  enum class Kind { dyadic, trig };

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  long cells() const { return cells_; }
  bool raw_mode() const { return raw_; }
  // Dimension of the span as a space of matrix functions.
  long rank() const;
  const std::vector<long>& generators() const { return generator_chars_; }

  DyadicFn basis_fn_dyadic(long i) const;
  TrigFn basis_fn_trig(long i) const;

  friend ModuleSpan build_module_span(const DyadicFn& h, const std::vector<long>& chars);
  friend ModuleSpan build_module_span(const TrigFn& h, const std::vector<long>& chars);
  friend ModuleSpan module_span_from_raw(const std::vector<DyadicFn>& vectors);
  friend ModuleSpan module_span_from_raw(const std::vector<TrigFn>& vectors);
  friend DyadicFn project(const ModuleSpan& span, const DyadicFn& v);
  friend TrigFn project(const ModuleSpan& span, const TrigFn& v);
  friend struct detail::SpanBuilder;

 private:
  Kind kind_ = Kind::dyadic;
  int dim_ = 0;
  long cells_ = 0;
  int meta_ = 0;  // resolution or gridsize
  bool raw_ = false;
  Eigen::MatrixXcd basis_;  // (cells*dim) x r, or (cells*dim*dim) x r when raw
  std::vector<long> generator_chars_;
};

// Orthonormal span of {char * h * E_pq} over all matrix units. Characters are
// Walsh indices (dyadic) or integer frequencies (trig).
ModuleSpan build_module_span(const DyadicFn& h, const std::vector<long>& chars);
ModuleSpan build_module_span(const TrigFn& h, const std::vector<long>& chars);

// Test-only bypass: orthonormalizes the given vectors with no closure applied.
ModuleSpan module_span_from_raw(const std::vector<DyadicFn>& vectors);
ModuleSpan module_span_from_raw(const std::vector<TrigFn>& vectors);

DyadicFn project(const ModuleSpan& span, const DyadicFn& v);
TrigFn project(const ModuleSpan& span, const TrigFn& v);

// Entrywise max of |<F, QG>_p - <QF, G>_p|; vanishes iff the span is
// module-closed (up to tolerance).
double partial_adjointness_gap(const ModuleSpan& span, const DyadicFn& f, const DyadicFn& g);
double partial_adjointness_gap(const ModuleSpan& span, const TrigFn& f, const TrigFn& g);

struct SplitDiagnostics {
  double column_norm_a = 0.0;
  double row_norm_b = 0.0;
  std::vector<double> g_increment_energies;
  double reconstruction_residual = 0.0;  // max entry of |a_j + b_j - target_j|
  double g_norm = 0.0;
  double h_norm = 0.0;
  double l1_norm = 0.0;
  double value = 0.0;  // column_norm_a + row_norm_b
  // Stages of the b-estimate chain, each dominating row_norm_b:
  // mean_t tr sqrt(h*Gh) <= mean_t ||h||_S2 sqrt(||G||_S1) <= ||h|| sqrt(||G||_L1).
  double b_cascade_pointwise = 0.0;
  double b_cascade_mid = 0.0;
  double b_cascade_outer = 0.0;
};

struct Splitting {
  OpSequence a;
  OpSequence b;
  OpSequence target;
  SplitDiagnostics diagnostics;
};

nlohmann::ordered_json splitting_to_json(const Splitting& s);

// The nested image subspaces A_j M_j (or A_{j+1} L_j) of one construction,
// in proof order.
struct ProjectionChain {
  std::vector<ModuleSpan> spans;
};

ProjectionChain khintchine_chain(const DyadicFn& h, int j_count);
ProjectionChain paley2_chain(const TrigFn& h, const LacunarySet& k);
ProjectionChain paley1_chain(const TrigFn& h, const LacunarySet& k, long tail_depth);

// Max L2(S2) residual of any basis vector of span j projected onto span j+1.
double chain_nesting_residual(const ProjectionChain& chain);

// Character index sets of the proof subspaces; exposed so tests can rebuild
// every span from its definition.
std::vector<long> khintchine_image_chars(int j);                  // A_j M_j
std::vector<long> khintchine_mspan_chars(int j);                  // M_j
std::vector<long> khintchine_gap_chars(int j);                    // A_{j+1} M_j
std::vector<long> paley2_image_chars(const LacunarySet& k, int j);  // A_j M_j
std::vector<long> paley2_mspan_chars(const LacunarySet& k, int j);  // M_j
std::vector<long> paley2_gap_chars(const LacunarySet& k, int j);    // A_{j+1} M_j
std::vector<long> paley1_s_chars(const LacunarySet& k, int j, long tail_depth);  // A_{j+1} L_j

// k_{J+1} = 2 k_J + 1, the minimal strictly lacunary continuation used for
// the last split and for gap validation.
long virtual_next(const LacunarySet& k);
long max_gap(const LacunarySet& k);

// Default Case 1 tail depth: spectrum_bound(f) + max gap of K.
long default_tail_depth(const TrigFn& f, const LacunarySet& k);

Splitting khintchine_split(const DyadicFn& f, int j_count);
Splitting paley_case2_split(const TrigFn& f, const LacunarySet& k);
Splitting paley_case1_split(const TrigFn& f, const LacunarySet& k, long tail_depth);

// Max entry gap between the computed a_j and the alternate form
// a_j = <g, A_j (P_j - P_{j-1}) h>_p; a consistency probe of the commutation
// identity, not a computation path.
double khintchine_a_form_gap(const DyadicFn& f, int j_count);
double paley2_a_form_gap(const TrigFn& f, const LacunarySet& k);
double paley1_a_form_gap(const TrigFn& f, const LacunarySet& k, long tail_depth);

}  // namespace ncx
