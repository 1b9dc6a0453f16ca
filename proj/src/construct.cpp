#include "ncx/construct.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include "ncx/errors.hpp"

namespace ncx {
namespace {

constexpr double kRankRatio = 1e-10;

double tr_sqrt_psd(const MatrixC& a) {
  Eigen::SelfAdjointEigenSolver<MatrixC> es((a + a.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw numerical_error("eigendecomposition failed");
  double total = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    total += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  return total;
}

Eigen::VectorXcd char_values(const DyadicFn& ref, long c) {
  Eigen::VectorXcd chi(ref.cells());
  for (long k = 0; k < ref.cells(); ++k)
    chi(k) = static_cast<double>(walsh_value(c, k, ref.resolution));
  return chi;
}

Eigen::VectorXcd char_values(const TrigFn& ref, long c) {
  const long mag = c < 0 ? -c : c;
  if (2 * mag >= ref.gridsize)
    throw alias_error("character frequency outside the alias-free window");
  Eigen::VectorXcd chi(ref.cells());
  for (long k = 0; k < ref.cells(); ++k)
    chi(k) = std::polar(1.0, static_cast<double>(c) * grid_point(ref.gridsize, k));
  return chi;
}

// Incremental orthonormal basis of the column space spanned by
// {chi * h.col(p)}, flattened to C^{cells*dim}. Projections of full matrix
// functions act column by column, which is exactly projection onto the
// module-closed span.
class ColumnLadder {
 public:
  ColumnLadder(long cells, int dim) : cells_(cells), dim_(dim), rows_(cells * dim) {
    basis_.resize(rows_, 0);
  }

  void add_char(const Eigen::VectorXcd& chi, const std::vector<MatrixC>& h) {
    ensure_capacity(dim_);
    for (int p = 0; p < dim_; ++p) {
      Eigen::VectorXcd v(rows_);
      for (long k = 0; k < cells_; ++k) v.segment(k * dim_, dim_) = chi(k) * h[k].col(p);
      lead_ = std::max(lead_, v.norm());
      for (int pass = 0; pass < 2; ++pass)
        if (rank_ > 0)
          v -= basis_.leftCols(rank_) * (basis_.leftCols(rank_).adjoint() * v).eval();
      const double nrm = v.norm();
      if (nrm > kRankRatio * lead_) basis_.col(rank_++) = v / nrm;
    }
  }

  long rank() const { return rank_; }

  Eigen::MatrixXcd take_basis() const { return basis_.leftCols(rank_); }

  std::vector<MatrixC> project_prefix(long r, const std::vector<MatrixC>& vals) const {
    Eigen::MatrixXcd y(rows_, dim_);
    for (long k = 0; k < cells_; ++k) y.block(k * dim_, 0, dim_, dim_) = vals[k];
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(rows_, dim_);
    if (r > 0) p = basis_.leftCols(r) * (basis_.leftCols(r).adjoint() * y).eval();
    std::vector<MatrixC> out(cells_);
    for (long k = 0; k < cells_; ++k) out[k] = p.block(k * dim_, 0, dim_, dim_);
    return out;
  }

 private:
  void ensure_capacity(long extra) {
    if (rank_ + extra <= basis_.cols()) return;
    const long cap = std::max({rank_ + extra, 2 * basis_.cols(), 16L});
    basis_.conservativeResize(Eigen::NoChange, std::min(cap, rows_ + extra));
  }

  long cells_;
  int dim_;
  long rows_;
  long rank_ = 0;
  double lead_ = 0.0;
  Eigen::MatrixXcd basis_;
};

MatrixC partial_values(const std::vector<MatrixC>& u, const std::vector<MatrixC>& v, int dim) {
  MatrixC r = MatrixC::Zero(dim, dim);
  for (size_t k = 0; k < u.size(); ++k) r += v[k].adjoint() * u[k];
  return r / static_cast<double>(u.size());
}

DyadicFn fn_sub(const DyadicFn& x, const DyadicFn& y) {
  std::vector<MatrixC> vals(x.values.size());
  for (size_t k = 0; k < vals.size(); ++k) vals[k] = x.values[k] - y.values[k];
  return DyadicFn(x.dim, x.resolution, std::move(vals));
}

TrigFn fn_sub(const TrigFn& x, const TrigFn& y) {
  std::vector<MatrixC> vals(x.values.size());
  for (size_t k = 0; k < vals.size(); ++k) vals[k] = x.values[k] - y.values[k];
  return TrigFn(x.dim, x.gridsize, std::max(x.spectrum_bound, y.spectrum_bound),
                std::move(vals));
}

struct SplitPlan {
  std::vector<long> ladder_chars;
  std::vector<long> checkpoint_prefix;  // char counts at which ranks are recorded
  std::vector<int> a_checkpoint;        // -1 selects the zero projection
  std::vector<int> b_checkpoint;
  std::vector<long> level_chars;
  std::vector<MatrixC> targets;
};

template <typename Fn>
Splitting assemble(const Fn& f, const SplitPlan& plan) {
  const auto pair = generic_factor(f);
  const Fn& g = pair.g;
  const Fn& h = pair.h;
  const long cells = f.cells();
  const int d = f.dim;

  ColumnLadder ladder(cells, d);
  std::vector<long> ranks;
  ranks.reserve(plan.checkpoint_prefix.size());
  size_t ci = 0;
  long count = 0;
  for (long c : plan.ladder_chars) {
    ladder.add_char(char_values(f, c), h.values);
    ++count;
    while (ci < plan.checkpoint_prefix.size() && plan.checkpoint_prefix[ci] == count) {
      ranks.push_back(ladder.rank());
      ++ci;
    }
  }
  if (ci != plan.checkpoint_prefix.size())
    throw numerical_error("internal: ladder checkpoints out of range");

  std::vector<std::vector<MatrixC>> projected(ranks.size());
  for (size_t i = 0; i < ranks.size(); ++i)
    projected[i] = ladder.project_prefix(ranks[i], g.values);
  const std::vector<MatrixC> zeros(cells, MatrixC::Zero(d, d));

  const long jn = static_cast<long>(plan.targets.size());
  std::vector<MatrixC> av(jn), bv(jn);
  std::vector<double> energies(jn);
  std::vector<std::vector<MatrixC>> incs(jn);
  for (long j = 0; j < jn; ++j) {
    const auto& qa = plan.a_checkpoint[j] < 0 ? zeros : projected[plan.a_checkpoint[j]];
    const auto& qb = projected[plan.b_checkpoint[j]];
    const Fn ah = modulate(h, plan.level_chars[j]);
    av[j] = partial_values(qa, ah.values, d);
    std::vector<MatrixC> inc(cells);
    double e = 0.0;
    for (long k = 0; k < cells; ++k) {
      inc[k] = qb[k] - qa[k];
      e += inc[k].squaredNorm();
    }
    bv[j] = partial_values(inc, ah.values, d);
    energies[j] = e / static_cast<double>(cells);
    incs[j] = std::move(inc);
  }

  Splitting s;
  s.a = OpSequence(d, std::move(av));
  s.b = OpSequence(d, std::move(bv));
  s.target = OpSequence(d, plan.targets);

  SplitDiagnostics& dg = s.diagnostics;
  dg.column_norm_a = column_norm(s.a);
  dg.row_norm_b = row_norm(s.b);
  dg.g_increment_energies = energies;
  dg.value = dg.column_norm_a + dg.row_norm_b;
  for (long j = 0; j < jn; ++j) {
    const MatrixC res = s.a.items[j] + s.b.items[j] - s.target.items[j];
    dg.reconstruction_residual = std::max(dg.reconstruction_residual,
                                          res.cwiseAbs().maxCoeff());
  }
  dg.g_norm = std::sqrt(std::max(0.0, l2_s2_inner(g, g).real()));
  dg.h_norm = std::sqrt(std::max(0.0, l2_s2_inner(h, h).real()));
  dg.l1_norm = l1_s1_norm(f);

  double pointwise = 0.0, mid = 0.0, mean_tr = 0.0;
  for (long k = 0; k < cells; ++k) {
    MatrixC gram = MatrixC::Zero(d, d);
    for (long j = 0; j < jn; ++j) gram += incs[j][k] * incs[j][k].adjoint();
    const double tr = std::max(0.0, gram.trace().real());
    pointwise += tr_sqrt_psd(h.values[k].adjoint() * gram * h.values[k]);
    mid += h.values[k].norm() * std::sqrt(tr);
    mean_tr += tr;
  }
  dg.b_cascade_pointwise = pointwise / static_cast<double>(cells);
  dg.b_cascade_mid = mid / static_cast<double>(cells);
  dg.b_cascade_outer = dg.h_norm * std::sqrt(mean_tr / static_cast<double>(cells));
  return s;
}

void check_block_index(int j, int limit, const char* what) {
  if (j < 0 || j > limit) throw domain_error(std::string("block index out of range for ") + what);
}

}  // namespace

namespace detail {

struct SpanBuilder {
  static ModuleSpan make(ModuleSpan::Kind kind, int dim, long cells, int meta, bool raw,
                         std::vector<long> chars, Eigen::MatrixXcd basis) {
    ModuleSpan span;
    span.kind_ = kind;
    span.dim_ = dim;
    span.cells_ = cells;
    span.meta_ = meta;
    span.raw_ = raw;
    span.generator_chars_ = std::move(chars);
    span.basis_ = std::move(basis);
    return span;
  }
};

}  // namespace detail

long ModuleSpan::rank() const {
  return raw_ ? basis_.cols() : basis_.cols() * dim_;
}

DyadicFn ModuleSpan::basis_fn_dyadic(long i) const {
  if (kind_ != Kind::dyadic) throw domain_error("span is not dyadic");
  if (i < 0 || i >= rank()) throw domain_error("basis index out of range");
  const double scale = std::sqrt(static_cast<double>(cells_));
  std::vector<MatrixC> vals(cells_, MatrixC::Zero(dim_, dim_));
  if (raw_) {
    for (long k = 0; k < cells_; ++k)
      vals[k] = scale * Eigen::Map<const MatrixC>(basis_.col(i).data() + k * dim_ * dim_,
                                                  dim_, dim_);
  } else {
    const long w = i / dim_;
    const long q = i % dim_;
    for (long k = 0; k < cells_; ++k)
      vals[k].col(q) = scale * basis_.col(w).segment(k * dim_, dim_);
  }
  return DyadicFn(dim_, meta_, std::move(vals));
}

TrigFn ModuleSpan::basis_fn_trig(long i) const {
  if (kind_ != Kind::trig) throw domain_error("span is not trig");
  if (i < 0 || i >= rank()) throw domain_error("basis index out of range");
  const double scale = std::sqrt(static_cast<double>(cells_));
  std::vector<MatrixC> vals(cells_, MatrixC::Zero(dim_, dim_));
  if (raw_) {
    for (long k = 0; k < cells_; ++k)
      vals[k] = scale * Eigen::Map<const MatrixC>(basis_.col(i).data() + k * dim_ * dim_,
                                                  dim_, dim_);
  } else {
    const long w = i / dim_;
    const long q = i % dim_;
    for (long k = 0; k < cells_; ++k)
      vals[k].col(q) = scale * basis_.col(w).segment(k * dim_, dim_);
  }
  return TrigFn(dim_, meta_, max_alias_free(meta_), std::move(vals));
}

namespace {

template <typename Fn>
ModuleSpan build_span_impl(const Fn& h, const std::vector<long>& chars, ModuleSpan::Kind kind,
                           int meta) {
  ColumnLadder ladder(h.cells(), h.dim);
  for (long c : chars) ladder.add_char(char_values(h, c), h.values);
  return detail::SpanBuilder::make(kind, h.dim, h.cells(), meta, false, chars,
                                   ladder.take_basis());
}

template <typename Fn>
ModuleSpan raw_span_impl(const std::vector<Fn>& vectors, ModuleSpan::Kind kind, int meta) {
  if (vectors.empty()) throw domain_error("raw span needs at least one vector");
  const long cells = vectors.front().cells();
  const int d = vectors.front().dim;
  const long rows = cells * d * d;

  Eigen::MatrixXcd basis(rows, static_cast<long>(vectors.size()));
  long rank = 0;
  double lead = 0.0;
  for (const Fn& f : vectors) {
    if (f.dim != d || f.cells() != cells) throw domain_error("raw span vectors disagree in shape");
    Eigen::VectorXcd v(rows);
    for (long k = 0; k < cells; ++k)
      v.segment(k * d * d, d * d) = Eigen::Map<const Eigen::VectorXcd>(f.values[k].data(), d * d);
    lead = std::max(lead, v.norm());
    for (int pass = 0; pass < 2; ++pass)
      if (rank > 0) v -= basis.leftCols(rank) * (basis.leftCols(rank).adjoint() * v).eval();
    const double nrm = v.norm();
    if (nrm > kRankRatio * lead) basis.col(rank++) = v / nrm;
  }
  return detail::SpanBuilder::make(kind, d, cells, meta, true, {},
                                   Eigen::MatrixXcd(basis.leftCols(rank)));
}

template <typename Fn>
std::vector<MatrixC> project_impl(const ModuleSpan& span, const Fn& v, ModuleSpan::Kind kind,
                                  bool raw, const Eigen::MatrixXcd& basis) {
  if (span.kind() != kind || span.dim() != v.dim || span.cells() != v.cells())
    throw domain_error("projection ambient mismatch");
  const long cells = v.cells();
  const int d = v.dim;
  std::vector<MatrixC> out(cells);
  if (raw) {
    Eigen::VectorXcd y(cells * d * d);
    for (long k = 0; k < cells; ++k)
      y.segment(k * d * d, d * d) = Eigen::Map<const Eigen::VectorXcd>(v.values[k].data(), d * d);
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(y.size());
    if (basis.cols() > 0) p = basis * (basis.adjoint() * y).eval();
    for (long k = 0; k < cells; ++k)
      out[k] = Eigen::Map<const MatrixC>(p.data() + k * d * d, d, d);
  } else {
    Eigen::MatrixXcd y(cells * d, d);
    for (long k = 0; k < cells; ++k) y.block(k * d, 0, d, d) = v.values[k];
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(cells * d, d);
    if (basis.cols() > 0) p = basis * (basis.adjoint() * y).eval();
    for (long k = 0; k < cells; ++k) out[k] = p.block(k * d, 0, d, d);
  }
  return out;
}

}  // namespace

ModuleSpan build_module_span(const DyadicFn& h, const std::vector<long>& chars) {
  return build_span_impl(h, chars, ModuleSpan::Kind::dyadic, h.resolution);
}

ModuleSpan build_module_span(const TrigFn& h, const std::vector<long>& chars) {
  return build_span_impl(h, chars, ModuleSpan::Kind::trig, h.gridsize);
}

ModuleSpan module_span_from_raw(const std::vector<DyadicFn>& vectors) {
  return raw_span_impl(vectors, ModuleSpan::Kind::dyadic,
                       vectors.empty() ? 0 : vectors.front().resolution);
}

ModuleSpan module_span_from_raw(const std::vector<TrigFn>& vectors) {
  return raw_span_impl(vectors, ModuleSpan::Kind::trig,
                       vectors.empty() ? 0 : vectors.front().gridsize);
}

DyadicFn project(const ModuleSpan& span, const DyadicFn& v) {
  auto vals = project_impl(span, v, ModuleSpan::Kind::dyadic, span.raw_, span.basis_);
  return DyadicFn(v.dim, v.resolution, std::move(vals));
}

TrigFn project(const ModuleSpan& span, const TrigFn& v) {
  auto vals = project_impl(span, v, ModuleSpan::Kind::trig, span.raw_, span.basis_);
  return TrigFn(v.dim, v.gridsize, max_alias_free(v.gridsize), std::move(vals));
}

double partial_adjointness_gap(const ModuleSpan& span, const DyadicFn& f, const DyadicFn& g) {
  const MatrixC lhs = partial_inner(f, project(span, g));
  const MatrixC rhs = partial_inner(project(span, f), g);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double partial_adjointness_gap(const ModuleSpan& span, const TrigFn& f, const TrigFn& g) {
  const MatrixC lhs = partial_inner(f, project(span, g));
  const MatrixC rhs = partial_inner(project(span, f), g);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

nlohmann::ordered_json splitting_to_json(const Splitting& s) {
  nlohmann::ordered_json d;
  d["column_norm_a"] = s.diagnostics.column_norm_a;
  d["row_norm_b"] = s.diagnostics.row_norm_b;
  d["value"] = s.diagnostics.value;
  d["reconstruction_residual"] = s.diagnostics.reconstruction_residual;
  d["g_norm"] = s.diagnostics.g_norm;
  d["h_norm"] = s.diagnostics.h_norm;
  d["l1_norm"] = s.diagnostics.l1_norm;
  d["g_increment_energies"] = s.diagnostics.g_increment_energies;
  d["b_cascade_pointwise"] = s.diagnostics.b_cascade_pointwise;
  d["b_cascade_mid"] = s.diagnostics.b_cascade_mid;
  d["b_cascade_outer"] = s.diagnostics.b_cascade_outer;
  nlohmann::ordered_json j;
  j["target"] = sequence_to_json(s.target);
  j["a"] = sequence_to_json(s.a);
  j["b"] = sequence_to_json(s.b);
  j["diagnostics"] = std::move(d);
  return j;
}

ProjectionChain khintchine_chain(const DyadicFn& h, int j_count) {
  if (j_count < 1) throw domain_error("chain needs at least one level");
  ProjectionChain chain;
  for (int j = 0; j <= j_count; ++j)
    chain.spans.push_back(build_module_span(h, khintchine_image_chars(j)));
  return chain;
}

ProjectionChain paley2_chain(const TrigFn& h, const LacunarySet& k) {
  ProjectionChain chain;
  for (int j = 0; j <= static_cast<int>(k.elements.size()); ++j)
    chain.spans.push_back(build_module_span(h, paley2_image_chars(k, j)));
  return chain;
}

ProjectionChain paley1_chain(const TrigFn& h, const LacunarySet& k, long tail_depth) {
  ProjectionChain chain;
  for (int j = 0; j < static_cast<int>(k.elements.size()); ++j)
    chain.spans.push_back(build_module_span(h, paley1_s_chars(k, j, tail_depth)));
  return chain;
}

double chain_nesting_residual(const ProjectionChain& chain) {
  double worst = 0.0;
  for (size_t i = 0; i + 1 < chain.spans.size(); ++i) {
    const ModuleSpan& inner = chain.spans[i];
    const ModuleSpan& outer = chain.spans[i + 1];
    for (long b = 0; b < inner.rank(); ++b) {
      double res2 = 0.0;
      if (inner.kind() == ModuleSpan::Kind::dyadic) {
        const DyadicFn u = inner.basis_fn_dyadic(b);
        const DyadicFn r = fn_sub(u, project(outer, u));
        res2 = std::max(0.0, l2_s2_inner(r, r).real());
      } else {
        const TrigFn u = inner.basis_fn_trig(b);
        const TrigFn r = fn_sub(u, project(outer, u));
        res2 = std::max(0.0, l2_s2_inner(r, r).real());
      }
      worst = std::max(worst, std::sqrt(res2));
    }
  }
  return worst;
}

std::vector<long> khintchine_image_chars(int j) {
  check_block_index(j, 60, "khintchine image");
  std::vector<long> out;
  const long top = 1L << (j + 1);
  for (long n = 0; n < top; ++n)
    if (n != (1L << j)) out.push_back(n);
  return out;
}

std::vector<long> khintchine_mspan_chars(int j) {
  check_block_index(j, 60, "khintchine span");
  std::vector<long> out;
  const long top = 1L << (j + 1);
  for (long n = 1; n < top; ++n) out.push_back(n);
  return out;
}

std::vector<long> khintchine_gap_chars(int j) {
  check_block_index(j, 59, "khintchine gap");
  std::vector<long> out;
  for (long n = (1L << (j + 1)) + 1; n < (1L << (j + 2)); ++n) out.push_back(n);
  return out;
}

std::vector<long> paley2_image_chars(const LacunarySet& k, int j) {
  k.validate();
  check_block_index(j, static_cast<int>(k.elements.size()), "paley2 image");
  const long kj = j < static_cast<int>(k.elements.size()) ? k.elements[j] : virtual_next(k);
  std::vector<long> out;
  for (long n = 0; n < kj; ++n) out.push_back(n);
  return out;
}

std::vector<long> paley2_mspan_chars(const LacunarySet& k, int j) {
  k.validate();
  check_block_index(j, static_cast<int>(k.elements.size()), "paley2 span");
  const long kj = j < static_cast<int>(k.elements.size()) ? k.elements[j] : virtual_next(k);
  std::vector<long> out;
  for (long n = -kj; n < 0; ++n) out.push_back(n);
  return out;
}

std::vector<long> paley2_gap_chars(const LacunarySet& k, int j) {
  k.validate();
  check_block_index(j, static_cast<int>(k.elements.size()) - 1, "paley2 gap");
  const long kj = k.elements[j];
  const long kj1 = j + 1 < static_cast<int>(k.elements.size()) ? k.elements[j + 1]
                                                               : virtual_next(k);
  std::vector<long> out;
  for (long n = kj1 - kj; n < kj1; ++n) out.push_back(n);
  return out;
}

std::vector<long> paley1_s_chars(const LacunarySet& k, int j, long tail_depth) {
  k.validate();
  check_block_index(j, static_cast<int>(k.elements.size()) - 1, "paley1 subspace");
  if (tail_depth < 0) throw domain_error("tail depth must be nonnegative");
  const long kj = k.elements[j];
  const long kj1 = j + 1 < static_cast<int>(k.elements.size()) ? k.elements[j + 1]
                                                               : virtual_next(k);
  std::vector<long> out;
  for (long n = -tail_depth; n < kj1 - kj; ++n) out.push_back(n);
  return out;
}

long virtual_next(const LacunarySet& k) {
  k.validate();
  return 2 * k.max_element() + 1;
}

long max_gap(const LacunarySet& k) {
  k.validate();
  long best = virtual_next(k) - k.max_element();
  for (size_t j = 0; j + 1 < k.elements.size(); ++j)
    best = std::max(best, k.elements[j + 1] - k.elements[j]);
  return best;
}

long default_tail_depth(const TrigFn& f, const LacunarySet& k) {
  return f.spectrum_bound + max_gap(k);
}

Splitting khintchine_split(const DyadicFn& f, int j_count) {
  if (j_count < 1) throw domain_error("khintchine split needs at least one term");
  if (f.resolution < j_count + 2)
    throw hypothesis_error("resolution too small: need N >= J + 2", {});
  const double tol = 1e-10 * (1.0 + l1_s1_norm(f));
  std::vector<long> offenders;
  for (long n = 0; n < f.cells(); ++n) {
    if (n > 0 && (n & (n - 1)) == 0) continue;
    if (walsh_coeff(f, n).cwiseAbs().maxCoeff() > tol) offenders.push_back(n);
  }
  if (!offenders.empty())
    throw hypothesis_error("spectrum off the Rademacher characters", offenders);

  SplitPlan plan;
  plan.ladder_chars.push_back(0);
  plan.checkpoint_prefix.push_back(1);
  for (int j = 1; j <= j_count; ++j) {
    plan.ladder_chars.push_back(1L << (j - 1));
    for (long n = (1L << j) + 1; n < (1L << (j + 1)); ++n) plan.ladder_chars.push_back(n);
    plan.checkpoint_prefix.push_back(static_cast<long>(plan.ladder_chars.size()));
  }
  for (int j = 0; j < j_count; ++j) {
    plan.a_checkpoint.push_back(j);
    plan.b_checkpoint.push_back(j + 1);
    plan.level_chars.push_back(1L << j);
    plan.targets.push_back(walsh_coeff(f, 1L << j));
  }
  return assemble(f, plan);
}

Splitting paley_case2_split(const TrigFn& f, const LacunarySet& k) {
  k.validate();
  const long kj1 = virtual_next(k);
  if (2 * (kj1 - 1) >= f.gridsize)
    throw alias_error("gridsize too small for the prefix ladder: need M > 4*k_max");
  const long win = max_alias_free(f.gridsize);
  const double tol = 1e-10 * (1.0 + l1_s1_norm(f));
  std::vector<long> offenders;
  for (long n = 1; n <= win; ++n) {
    if (std::binary_search(k.elements.begin(), k.elements.end(), n)) continue;
    if (fourier_coeff(f, n).cwiseAbs().maxCoeff() > tol) offenders.push_back(n);
  }
  if (!offenders.empty())
    throw hypothesis_error("positive spectrum off the lacunary set", offenders);

  const int terms = static_cast<int>(k.elements.size());
  SplitPlan plan;
  for (long n = 0; n < kj1; ++n) plan.ladder_chars.push_back(n);
  for (int j = 0; j < terms; ++j) plan.checkpoint_prefix.push_back(k.elements[j]);
  plan.checkpoint_prefix.push_back(kj1);
  for (int j = 0; j < terms; ++j) {
    plan.a_checkpoint.push_back(j);
    plan.b_checkpoint.push_back(j + 1);
    plan.level_chars.push_back(k.elements[j]);
    plan.targets.push_back(fourier_coeff(f, k.elements[j]));
  }
  return assemble(f, plan);
}

Splitting paley_case1_split(const TrigFn& f, const LacunarySet& k, long tail_depth) {
  k.validate();
  const long widest = max_gap(k);
  if (tail_depth < widest)
    throw truncation_error("tail depth below the largest gap of the lacunary set");

  const int terms = static_cast<int>(k.elements.size());
  std::vector<long> gaps(terms);
  for (int j = 0; j < terms; ++j) {
    const long kj1 = j + 1 < terms ? k.elements[j + 1] : virtual_next(k);
    gaps[j] = kj1 - k.elements[j];
  }
  const long reach = std::max({tail_depth, gaps.back() - 1, k.max_element()});
  if (2 * reach >= f.gridsize)
    throw alias_error("gridsize too small for the tail ladder");

  const long win = max_alias_free(f.gridsize);
  const double tol = 1e-10 * (1.0 + l1_s1_norm(f));
  std::vector<long> offenders;
  for (long n = -win; n < 0; ++n)
    if (fourier_coeff(f, n).cwiseAbs().maxCoeff() > tol) offenders.push_back(n);
  if (!offenders.empty())
    throw hypothesis_error("negative spectrum present: f is not analytic", offenders);

  SplitPlan plan;
  for (long n = -tail_depth; n < gaps.back(); ++n) plan.ladder_chars.push_back(n);
  for (int j = 0; j < terms; ++j) plan.checkpoint_prefix.push_back(tail_depth + gaps[j]);
  for (int j = 0; j < terms; ++j) {
    plan.a_checkpoint.push_back(j - 1);
    plan.b_checkpoint.push_back(j);
    plan.level_chars.push_back(k.elements[j]);
    plan.targets.push_back(fourier_coeff(f, k.elements[j]));
  }
  return assemble(f, plan);
}

double khintchine_a_form_gap(const DyadicFn& f, int j_count) {
  const Splitting s = khintchine_split(f, j_count);
  const auto pair = generic_factor(f);
  double worst = 0.0;
  DyadicFn prev;
  for (int j = 0; j < j_count; ++j) {
    const ModuleSpan pj = build_module_span(pair.h, khintchine_mspan_chars(j));
    const DyadicFn pjh = project(pj, pair.h);
    const DyadicFn diff = j == 0 ? pjh : fn_sub(pjh, prev);
    const MatrixC alt = partial_inner(pair.g, modulate(diff, 1L << j));
    worst = std::max(worst, (alt - s.a.items[j]).cwiseAbs().maxCoeff());
    prev = pjh;
  }
  return worst;
}

double paley2_a_form_gap(const TrigFn& f, const LacunarySet& k) {
  const Splitting s = paley_case2_split(f, k);
  const auto pair = generic_factor(f);
  double worst = 0.0;
  TrigFn prev;
  for (int j = 0; j < static_cast<int>(k.elements.size()); ++j) {
    const ModuleSpan pj = build_module_span(pair.h, paley2_mspan_chars(k, j));
    const TrigFn pjh = project(pj, pair.h);
    const TrigFn diff = j == 0 ? pjh : fn_sub(pjh, prev);
    const MatrixC alt = partial_inner(pair.g, modulate(diff, k.elements[j]));
    worst = std::max(worst, (alt - s.a.items[j]).cwiseAbs().maxCoeff());
    prev = pjh;
  }
  return worst;
}

double paley1_a_form_gap(const TrigFn& f, const LacunarySet& k, long tail_depth) {
  const Splitting s = paley_case1_split(f, k, tail_depth);
  const auto pair = generic_factor(f);
  double worst = s.a.items[0].cwiseAbs().maxCoeff();
  for (int j = 1; j < static_cast<int>(k.elements.size()); ++j) {
    const long kj = k.elements[j];
    const long floor = -tail_depth - kj;
    std::vector<long> wide, narrow;
    for (long n = floor; n < -k.elements[j - 1]; ++n) wide.push_back(n);
    for (long n = floor; n < -kj; ++n) narrow.push_back(n);
    const TrigFn ph_wide = project(build_module_span(pair.h, wide), pair.h);
    const TrigFn ph_narrow = project(build_module_span(pair.h, narrow), pair.h);
    const MatrixC alt = partial_inner(pair.g, modulate(fn_sub(ph_wide, ph_narrow), kj));
    worst = std::max(worst, (alt - s.a.items[j]).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace ncx
