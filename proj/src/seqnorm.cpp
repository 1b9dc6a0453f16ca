#include "ncx/seqnorm.hpp"

#include <cmath>
#include <random>

#include "ncx/opfunc.hpp"

namespace ncx {

namespace {

// Eigenvalue form of tr sqrt_psd for Gram matrices, which are PSD by
// construction; rounding negatives are clamped.
double tr_sqrt(const MatrixC& x) {
  Eigen::SelfAdjointEigenSolver<MatrixC> es((x + x.adjoint()) / 2.0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    acc += std::sqrt(std::max(es.eigenvalues()[i], 0.0));
  }
  return acc;
}

MatrixC gram_columns(const OpSequence& c) {
  MatrixC x = MatrixC::Zero(c.dim, c.dim);
  for (const MatrixC& m : c.items) x += m.adjoint() * m;
  return x;
}

MatrixC gram_rows(const OpSequence& c) {
  MatrixC x = MatrixC::Zero(c.dim, c.dim);
  for (const MatrixC& m : c.items) x += m * m.adjoint();
  return x;
}

double op_norm_psd(const MatrixC& x) {
  Eigen::SelfAdjointEigenSolver<MatrixC> es((x + x.adjoint()) / 2.0);
  const Eigen::Index n = es.eigenvalues().size();
  return n ? std::max(es.eigenvalues()[n - 1], 0.0) : 0.0;
}

MatrixC inv_sqrt_shifted(const MatrixC& x, double eps, double* tr_sqrt_out) {
  Eigen::SelfAdjointEigenSolver<MatrixC> es((x + x.adjoint()) / 2.0);
  Eigen::VectorXd ev = es.eigenvalues();
  double acc = 0.0;
  Eigen::VectorXd inv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double lam = std::max(ev[i], 0.0) + eps;
    acc += std::sqrt(lam);
    inv[i] = 1.0 / std::sqrt(lam);
  }
  if (tr_sqrt_out) *tr_sqrt_out = acc;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

using Seq = std::vector<MatrixC>;

Seq residual(const OpSequence& c, const Seq& a) {
  Seq b(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) b[j] = c.items[j] - a[j];
  return b;
}

double exact_value(const OpSequence& c, const Seq& a) {
  OpSequence sa(c.dim, a);
  OpSequence sb(c.dim, residual(c, a));
  return column_norm(sa) + row_norm(sb);
}

double smoothed_objective(const OpSequence& c, const Seq& a, double eps) {
  MatrixC x = MatrixC::Zero(c.dim, c.dim);
  MatrixC y = MatrixC::Zero(c.dim, c.dim);
  for (std::size_t j = 0; j < a.size(); ++j) {
    x += a[j].adjoint() * a[j];
    const MatrixC b = c.items[j] - a[j];
    y += b * b.adjoint();
  }
  double sx = 0.0, sy = 0.0;
  inv_sqrt_shifted(x, eps, &sx);
  inv_sqrt_shifted(y, eps, &sy);
  return sx + sy;
}

struct DescentResult {
  Seq a;
  Seq witness;
  long iterations = 0;
};

DescentResult descend(const OpSequence& c, Seq a, double scale2, int max_iter) {
  const double grad_stop = 1e-10 * std::max(1.0, std::sqrt(scale2));
  const int per_stage = std::max(1, max_iter / 3);
  DescentResult res;
  res.witness = a;
  for (const double eps_rel : {1e-2, 1e-4, 1e-6}) {
    const double eps = eps_rel * scale2;
    double f0 = smoothed_objective(c, a, eps);
    double step = 1.0;
    for (int it = 0; it < per_stage; ++it) {
      MatrixC x = MatrixC::Zero(c.dim, c.dim);
      MatrixC y = MatrixC::Zero(c.dim, c.dim);
      Seq b = residual(c, a);
      for (std::size_t j = 0; j < a.size(); ++j) {
        x += a[j].adjoint() * a[j];
        y += b[j] * b[j].adjoint();
      }
      const MatrixC xi = inv_sqrt_shifted(x, eps, nullptr);
      const MatrixC yi = inv_sqrt_shifted(y, eps, nullptr);
      Seq grad(a.size());
      double grad_norm2 = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) {
        res.witness[j] = a[j] * xi;
        grad[j] = a[j] * xi - yi * b[j];
        grad_norm2 += grad[j].squaredNorm();
      }
      if (std::sqrt(grad_norm2) <= grad_stop) break;
      step = std::min(step * 2.0, 1e3);
      while (step > 1e-18) {
        Seq trial(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) trial[j] = a[j] - step * grad[j];
        if (smoothed_objective(c, trial, eps) <= f0 - 1e-4 * step * grad_norm2) break;
        step /= 2.0;
      }
      for (std::size_t j = 0; j < a.size(); ++j) a[j] -= step * grad[j];
      f0 = smoothed_objective(c, a, eps);
      ++res.iterations;
    }
  }
  res.a = std::move(a);
  return res;
}

}  // namespace

OpSequence::OpSequence(int d, std::vector<MatrixC> its) : dim(d), items(std::move(its)) {
  if (d < 1) throw domain_error("OpSequence dimension must be positive");
  for (const MatrixC& m : items) {
    if (m.rows() != d || m.cols() != d) throw domain_error("OpSequence item dim mismatch");
  }
}

double column_norm(const OpSequence& c) { return tr_sqrt(gram_columns(c)); }
double row_norm(const OpSequence& c) { return tr_sqrt(gram_rows(c)); }

double splitting_value(const OpSequence& a, const OpSequence& b) {
  if (a.dim != b.dim || a.size() != b.size()) {
    throw domain_error("splitting_value requires matching sequences");
  }
  return column_norm(a) + row_norm(b);
}

double dual_lower_bound(const OpSequence& c, const OpSequence& x) {
  if (c.dim != x.dim || c.size() != x.size()) {
    throw domain_error("dual_lower_bound requires matching sequences");
  }
  const double s =
      std::sqrt(std::max(op_norm_psd(gram_columns(x)), op_norm_psd(gram_rows(x))));
  if (s <= 0.0) return 0.0;
  Complex pairing = 0.0;
  for (long j = 0; j < c.size(); ++j) pairing += trace(x.items[j].adjoint() * c.items[j]);
  return pairing.real() / s;
}

double scalar_oracle(const OpSequence& c) {
  if (c.dim != 1) throw domain_error("scalar_oracle requires dim 1");
  double acc = 0.0;
  for (const MatrixC& m : c.items) acc += std::norm(m(0, 0));
  return std::sqrt(acc);
}

SplitCertificate triple_norm_solve(const OpSequence& c, const SolveOptions& opts,
                                   const std::optional<OpSequence>& warm_start) {
  SplitCertificate cert;
  const long len = c.size();
  cert.a = OpSequence(c.dim, Seq(len, MatrixC::Zero(c.dim, c.dim)));
  cert.b = cert.a;
  double scale2 = 0.0;
  for (const MatrixC& m : c.items) scale2 += m.squaredNorm();
  if (scale2 == 0.0 || len == 0) return cert;
  if (warm_start && (warm_start->dim != c.dim || warm_start->size() != len)) {
    throw domain_error("warm start shape mismatch");
  }

  Seq half(len);
  for (long j = 0; j < len; ++j) half[j] = c.items[j] / 2.0;
  std::vector<Seq> starts{half};
  if (warm_start) starts.push_back(warm_start->items);

  double best = std::numeric_limits<double>::infinity();
  Seq best_a;
  std::vector<Seq> witnesses;
  auto consider = [&](const Seq& a) {
    const double v = exact_value(c, a);
    if (v < best) {
      best = v;
      best_a = a;
    }
  };

  auto run_from = [&](const Seq& s) {
    consider(s);
    DescentResult r = descend(c, s, scale2, opts.max_iter);
    cert.iterations += r.iterations;
    consider(r.a);
    witnesses.push_back(std::move(r.witness));
  };
  for (const Seq& s : starts) run_from(s);

  // Trivial feasible points b = 0 and a = 0.
  Seq zero(len, MatrixC::Zero(c.dim, c.dim));
  consider(c.items);
  consider(zero);

  auto best_dual = [&]() {
    double dl = dual_lower_bound(c, c);
    for (const Seq& w : witnesses) {
      dl = std::max(dl, dual_lower_bound(c, OpSequence(c.dim, w)));
    }
    return dl;
  };
  cert.dual_lower = best_dual();

  // Seeded perturbation restarts, only when the gap is still open.
  std::mt19937_64 rng(opts.seed * 0x9e3779b97f4a7c15ULL + 1);
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (best - cert.dual_lower <= opts.tolerance * (1.0 + best)) break;
    Seq s(len);
    const double sigma = 0.05 * std::sqrt(scale2 / static_cast<double>(len));
    auto gauss = [&rng]() {
      const double u1 = ((rng() >> 11) + 0.5) * 0x1p-53;
      const double u2 = ((rng() >> 11) + 0.5) * 0x1p-53;
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    };
    for (long j = 0; j < len; ++j) {
      MatrixC noise(c.dim, c.dim);
      for (Eigen::Index r = 0; r < c.dim; ++r) {
        for (Eigen::Index cc = 0; cc < c.dim; ++cc) noise(r, cc) = Complex(gauss(), gauss());
      }
      s[j] = c.items[j] / 2.0 + sigma * noise;
    }
    run_from(s);
    cert.dual_lower = best_dual();
  }

  cert.value = best;
  cert.a = OpSequence(c.dim, best_a);
  cert.b = OpSequence(c.dim, residual(c, best_a));
  cert.converged = (best - cert.dual_lower) <= opts.tolerance * (1.0 + best);
  return cert;
}

nlohmann::ordered_json sequence_to_json(const OpSequence& c) {
  nlohmann::ordered_json j;
  j["dim"] = c.dim;
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const MatrixC& m : c.items) items.push_back(matrix_to_json(m));
  j["items"] = std::move(items);
  return j;
}

OpSequence sequence_from_json(const nlohmann::json& j) {
  const int d = j.at("dim").get<int>();
  std::vector<MatrixC> items;
  for (const auto& m : j.at("items")) items.push_back(matrix_from_json(m));
  return OpSequence(d, std::move(items));
}

}  // namespace ncx
