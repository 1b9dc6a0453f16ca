#include "ncx/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "ncx/errors.hpp"

namespace ncx {
namespace {

double uniform01(std::mt19937_64& rng) { return ((rng() >> 11) + 0.5) * 0x1p-53; }

double gauss(std::mt19937_64& rng) {
  const double u = uniform01(rng);
  const double v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

MatrixC gauss_matrix(std::mt19937_64& rng, int d, double scale) {
  MatrixC m(d, d);
  const double s = scale * std::numbers::sqrt2 / 2.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(gauss(rng) * s, gauss(rng) * s);
  return m;
}

std::mt19937_64 instance_rng(unsigned long seed) {
  return std::mt19937_64(seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
}

constexpr long kMaxDyadicCells = 1L << 16;
constexpr long kMaxTrigCells = 1L << 18;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

LacunarySet resolve_kset(const InstanceSpec& spec) {
  if (!spec.kset.empty()) {
    LacunarySet k{spec.kset};
    k.validate();
    return k;
  }
  return gen_lacunary(spec.seed, spec.terms - 1, spec.k0);
}

TrigFn synth_trig(int d, int gridsize, long bound,
                  const std::vector<std::pair<long, MatrixC>>& coeffs) {
  std::vector<MatrixC> vals(gridsize, MatrixC::Zero(d, d));
  for (long m = 0; m < gridsize; ++m) {
    const double t = grid_point(gridsize, m);
    for (const auto& [n, c] : coeffs)
      vals[m] += std::polar(1.0, static_cast<double>(n) * t) * c;
  }
  return TrigFn(d, gridsize, bound, std::move(vals));
}

}  // namespace

const char* kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::khintchine: return "khintchine";
    case InstanceKind::paley1: return "paley1";
    case InstanceKind::paley2: return "paley2";
    case InstanceKind::steinhaus: return "steinhaus";
  }
  throw domain_error("unknown instance kind");
}

InstanceKind kind_from_name(const std::string& name) {
  if (name == "khintchine") return InstanceKind::khintchine;
  if (name == "paley1") return InstanceKind::paley1;
  if (name == "paley2") return InstanceKind::paley2;
  if (name == "steinhaus") return InstanceKind::steinhaus;
  throw domain_error("unknown instance kind: " + name);
}

void InstanceSpec::validate() const {
  if (dim < 1 || dim > 16) throw domain_error("dim must lie in [1, 16]");
  if (terms < 1) throw domain_error("terms must be at least 1");
  if (k0 < 1) throw domain_error("k0 must be at least 1");
  if (resolution_override < 0 || gridsize_override < 0)
    throw domain_error("overrides must be nonnegative");
  if (!kset.empty()) LacunarySet{kset}.validate();
}

LacunarySet gen_lacunary(unsigned long seed, int j_max, long k0) {
  if (k0 < 1) throw domain_error("k0 must be at least 1");
  if (j_max < 0) throw domain_error("j_max must be nonnegative");
  std::mt19937_64 rng(seed);
  LacunarySet k;
  k.elements.push_back(k0);
  for (int j = 0; j < j_max; ++j) {
    const long prev = k.elements.back();
    const long jitter = seed == 0 ? 0 : static_cast<long>(rng() % (prev + 1));
    k.elements.push_back(2 * prev + 1 + jitter);
  }
  k.validate();
  return k;
}

Instance gen_instance(const InstanceSpec& spec) {
  spec.validate();
  Instance inst;
  inst.spec = spec;
  const int d = spec.dim;
  const double scale = std::pow(static_cast<double>(d), -1.5);
  auto rng = instance_rng(spec.seed);

  if (spec.kind == InstanceKind::khintchine) {
    const int n_res = spec.resolution_override > 0 ? spec.resolution_override : spec.terms + 2;
    if (n_res < spec.terms + 2) throw domain_error("resolution override below terms + 2");
    if ((1L << n_res) * d * d > kMaxDyadicCells)
      throw domain_error("instance exceeds the dyadic size limit 2^N * d^2 <= 2^16");
    std::vector<MatrixC> coeffs(spec.terms);
    for (int j = 0; j < spec.terms; ++j) coeffs[j] = gauss_matrix(rng, d, scale);
    std::vector<MatrixC> vals(1L << n_res, MatrixC::Zero(d, d));
    for (long cell = 0; cell < (1L << n_res); ++cell)
      for (int j = 0; j < spec.terms; ++j)
        vals[cell] += static_cast<double>(rademacher_value(j, cell, n_res)) * coeffs[j];
    inst.dyadic = DyadicFn(d, n_res, std::move(vals));
    return inst;
  }

  inst.kset = resolve_kset(spec);
  const long k_max = inst.kset.max_element();
  long bound = 0;
  std::vector<std::pair<long, MatrixC>> coeffs;
  if (spec.kind == InstanceKind::paley1) {
    const long n_max = k_max + 3;
    bound = n_max;
    for (long n = 0; n <= n_max; ++n) coeffs.emplace_back(n, gauss_matrix(rng, d, scale));
  } else if (spec.kind == InstanceKind::paley2) {
    const long n_neg = 8;
    bound = std::max(k_max, n_neg);
    for (long k : inst.kset.elements) coeffs.emplace_back(k, gauss_matrix(rng, d, scale));
    for (long n = -1; n >= -n_neg; --n) coeffs.emplace_back(n, gauss_matrix(rng, d, scale));
  } else {
    bound = k_max;
    for (long k : inst.kset.elements) coeffs.emplace_back(k, gauss_matrix(rng, d, scale));
  }
  const long m_default = 4 * (k_max + bound + 1);
  const long m_grid = spec.gridsize_override > 0 ? spec.gridsize_override : m_default;
  if (m_grid * d * d > kMaxTrigCells)
    throw domain_error("instance exceeds the trig size limit M * d^2 <= 2^18");
  inst.trig = synth_trig(d, static_cast<int>(m_grid), bound, coeffs);
  if (spec.kind == InstanceKind::paley1) inst.tail_depth = default_tail_depth(inst.trig, inst.kset);
  return inst;
}

bool ReportRow::invariants_hold() const {
  if (!ok()) return false;
  if (dual_lower > solver_value + 1e-9) return false;
  if (solver_value > construction_value + 1e-6) return false;
  if (ratio_construction > 2.0 * (1.0 + 1e-6)) return false;
  return true;
}

ReportRow run_one(const InstanceSpec& spec, const SolveOptions& opts) {
  ReportRow row;
  row.kind = kind_name(spec.kind);
  row.dim = spec.dim;
  row.terms = spec.terms;
  row.seed = spec.seed;
  row.id = row.kind + "-d" + std::to_string(spec.dim) + "-t" + std::to_string(spec.terms) +
           "-s" + std::to_string(spec.seed);
  row.status = "ok";
  try {
    const Instance inst = gen_instance(spec);
    if (spec.kind != InstanceKind::khintchine)
      row.terms = static_cast<int>(inst.kset.elements.size());
    Splitting s;
    switch (spec.kind) {
      case InstanceKind::khintchine:
        s = khintchine_split(inst.dyadic, spec.terms);
        break;
      case InstanceKind::paley1:
        s = paley_case1_split(inst.trig, inst.kset, inst.tail_depth);
        break;
      case InstanceKind::paley2:
      case InstanceKind::steinhaus:
        s = paley_case2_split(inst.trig, inst.kset);
        break;
    }
    row.l1_norm = s.diagnostics.l1_norm;
    row.construction_value = splitting_value(s.a, s.b);
    const SplitCertificate cert = triple_norm_solve(s.target, opts, s.a);
    row.solver_value = cert.value;
    row.dual_lower = cert.dual_lower;
    row.reconstruction_residual = s.diagnostics.reconstruction_residual;
    row.duality_gap = cert.value - cert.dual_lower;
    if (row.l1_norm > 0.0) {
      row.ratio_construction = row.construction_value / row.l1_norm;
      row.ratio_solver = row.solver_value / row.l1_norm;
    }
  } catch (const hypothesis_error& e) {
    row.status = "hypothesis_error";
    row.error = e.what();
  } catch (const std::exception& e) {
    row.status = "error";
    row.error = e.what();
  }
  return row;
}

std::vector<ReportRow> run_experiment(const std::vector<InstanceSpec>& specs,
                                      const SolveOptions& opts) {
  std::vector<ReportRow> rows;
  rows.reserve(specs.size());
  for (size_t i = 0; i < specs.size(); ++i) {
    ReportRow row = run_one(specs[i], opts);
    row.id += "-" + std::to_string(i);
    rows.push_back(std::move(row));
  }
  return rows;
}

ExperimentSummary summarize(const std::vector<ReportRow>& rows) {
  ExperimentSummary s;
  s.rows = static_cast<long>(rows.size());
  for (const ReportRow& r : rows) {
    if (!r.ok()) {
      ++s.failed;
      s.all_invariants_hold = false;
      if (r.status == "hypothesis_error") s.any_hypothesis_error = true;
      continue;
    }
    if (!r.invariants_hold()) s.all_invariants_hold = false;
    auto& mc = s.max_ratio_construction[r.kind];
    mc = std::max(mc, r.ratio_construction);
    auto& ms = s.max_ratio_solver[r.kind];
    ms = std::max(ms, r.ratio_solver);
  }
  return s;
}

const char* const kCsvHeader =
    "id,kind,dim,terms,seed,status,l1_norm,construction_value,solver_value,dual_lower,"
    "ratio_construction,ratio_solver,reconstruction_residual,duality_gap,error";

nlohmann::ordered_json row_to_json(const ReportRow& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["kind"] = r.kind;
  j["dim"] = r.dim;
  j["terms"] = r.terms;
  j["seed"] = r.seed;
  j["status"] = r.status;
  j["l1_norm"] = r.l1_norm;
  j["construction_value"] = r.construction_value;
  j["solver_value"] = r.solver_value;
  j["dual_lower"] = r.dual_lower;
  j["ratio_construction"] = r.ratio_construction;
  j["ratio_solver"] = r.ratio_solver;
  j["reconstruction_residual"] = r.reconstruction_residual;
  j["duality_gap"] = r.duality_gap;
  j["error"] = r.error;
  return j;
}

nlohmann::ordered_json rows_to_json(const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ReportRow& r : rows) arr.push_back(row_to_json(r));
  return arr;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::string out = kCsvHeader;
  out += "\n";
  for (const ReportRow& r : rows) {
    out += r.id + "," + r.kind + "," + std::to_string(r.dim) + "," + std::to_string(r.terms) +
           "," + std::to_string(r.seed) + "," + r.status + "," + fmt17(r.l1_norm) + "," +
           fmt17(r.construction_value) + "," + fmt17(r.solver_value) + "," +
           fmt17(r.dual_lower) + "," + fmt17(r.ratio_construction) + "," +
           fmt17(r.ratio_solver) + "," + fmt17(r.reconstruction_residual) + "," +
           fmt17(r.duality_gap) + "," + csv_quote(r.error) + "\n";
  }
  return out;
}

nlohmann::ordered_json spec_to_json(const InstanceSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(spec.kind);
  j["dim"] = spec.dim;
  j["terms"] = spec.terms;
  j["kset"] = spec.kset;
  j["seed"] = spec.seed;
  j["resolution_override"] = spec.resolution_override;
  j["gridsize_override"] = spec.gridsize_override;
  j["k0"] = spec.k0;
  return j;
}

InstanceSpec spec_from_json(const nlohmann::json& j) {
  InstanceSpec spec;
  spec.kind = kind_from_name(j.at("kind").get<std::string>());
  spec.dim = j.value("dim", 1);
  spec.terms = j.value("terms", 1);
  spec.kset = j.value("kset", std::vector<long>{});
  spec.seed = j.value("seed", 0UL);
  spec.resolution_override = j.value("resolution_override", 0);
  spec.gridsize_override = j.value("gridsize_override", 0);
  spec.k0 = j.value("k0", 1L);
  spec.validate();
  return spec;
}

nlohmann::ordered_json instance_to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["spec"] = spec_to_json(inst.spec);
  j["kset"] = inst.kset.elements;
  j["tail_depth"] = inst.tail_depth;
  j["f"] = inst.spec.kind == InstanceKind::khintchine ? fn_to_json(inst.dyadic)
                                                      : fn_to_json(inst.trig);
  return j;
}

namespace {

void expect(bool cond, const std::string& msg) {
  if (!cond) throw numerical_error(msg);
}

void suite_matrix_core() {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    const MatrixC a = gauss_matrix(rng, d, 1.0);
    const SvdTriple t = svd(a);
    expect((t.reconstruct() - a).cwiseAbs().maxCoeff() <=
               1e-10 * (1.0 + t.singulars.maxCoeff()),
           "svd reconstruction");
    const MatrixC psd = a * a.adjoint();
    const MatrixC root = sqrt_psd(psd);
    expect((root * root - psd).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + psd.norm()),
           "sqrt_psd square");
    const auto [b, c] = factor_unit_ball(a);
    expect((b.adjoint() * c - a).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + a.norm()),
           "factor_unit_ball product");
    expect(std::abs(schatten_norm(b, 2.0) * schatten_norm(b, 2.0) - schatten_norm(a, 1.0)) <=
               1e-8 * (1.0 + schatten_norm(a, 1.0)),
           "factor_unit_ball balance");
    const MatrixC m2 = gauss_matrix(rng, d, 1.0);
    for (const auto& [p, q] : std::vector<std::pair<double, double>>{
             {2.0, 2.0}, {2.0, 1.0}, {4.0, 4.0 / 3.0}, {2.0, 2.0 / 3.0}}) {
      const double scl = schatten_norm(a, p) * schatten_norm(m2, q);
      expect(hoelder_gap(a, m2, p, q) >= -1e-10 * (1.0 + scl), "hoelder gap sign");
    }
  }
}

void suite_opfunc() {
  const int n_res = 4;
  const long cells = 1L << n_res;
  for (long m = 0; m < cells; ++m)
    for (long n = 0; n < cells; ++n) {
      double acc = 0.0;
      for (long cell = 0; cell < cells; ++cell)
        acc += walsh_value(m, cell, n_res) * walsh_value(n, cell, n_res);
      acc /= static_cast<double>(cells);
      expect(acc == (m == n ? 1.0 : 0.0), "walsh orthonormality");
    }
  std::mt19937_64 rng(12);
  std::vector<MatrixC> vals(cells);
  for (long cell = 0; cell < cells; ++cell) vals[cell] = gauss_matrix(rng, 2, 1.0);
  const DyadicFn f(2, n_res, vals);
  double sum = 0.0;
  for (long n = 0; n < cells; ++n) sum += walsh_coeff(f, n).squaredNorm();
  const double energy = l2_s2_inner(f, f).real();
  expect(std::abs(sum - energy) <= 1e-8 * (1.0 + energy), "walsh parseval");

  const TrigFn g = synth_trig(2, 64, 5,
                              {{3, gauss_matrix(rng, 2, 1.0)}, {-2, gauss_matrix(rng, 2, 1.0)}});
  const TrigFn shifted = modulate(g, 4);
  expect((fourier_coeff(shifted, 7) - fourier_coeff(g, 3)).cwiseAbs().maxCoeff() <= 1e-10,
         "modulation shifts spectrum");
}

void suite_factorize() {
  std::mt19937_64 rng(13);
  std::vector<MatrixC> vals(16);
  for (auto& v : vals) v = gauss_matrix(rng, 3, 1.0);
  const DyadicFn f(3, 4, vals);
  const auto pair = generic_factor(f);
  const DyadicFn prod = pointwise_product(pair.g, pair.h, ProductMode::adjoint_left);
  double worst = 0.0;
  for (long k = 0; k < f.cells(); ++k)
    worst = std::max(worst, (prod.values[k] - f.values[k]).cwiseAbs().maxCoeff());
  expect(worst <= 1e-10 * (1.0 + l1_s1_norm(f)), "generic factor reconstructs");
  const double l1 = l1_s1_norm(f);
  expect(std::abs(l2_s2_inner(pair.g, pair.g).real() - l1) <= 1e-8 * (1.0 + l1),
         "factor g energy");
  expect(std::abs(l2_s2_inner(pair.h, pair.h).real() - l1) <= 1e-8 * (1.0 + l1),
         "factor h energy");
}

void suite_seqnorm() {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const int len = 1 + static_cast<int>(rng() % 6);
    std::vector<MatrixC> items(len);
    for (auto& it : items) it = gauss_matrix(rng, 1, 1.0);
    const OpSequence c(1, items);
    const double oracle = scalar_oracle(c);
    const SplitCertificate cert = triple_norm_solve(c);
    expect(std::abs(cert.value - oracle) <= 1e-4 * (1.0 + oracle), "scalar oracle agreement");
  }
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<MatrixC> items(3);
    for (auto& it : items) it = gauss_matrix(rng, 2, 1.0);
    const OpSequence c(2, items);
    const SplitCertificate cert = triple_norm_solve(c);
    expect(cert.dual_lower <= cert.value + 1e-9, "weak duality");
    expect(cert.value <= std::min(column_norm(c), row_norm(c)) + 1e-9, "trivial splits dominate");
    expect(cert.value - cert.dual_lower <= 1e-2 * (1.0 + cert.value), "duality gap");
  }
}

void check_splitting(const Splitting& s, const std::string& label) {
  const auto& dg = s.diagnostics;
  expect(dg.reconstruction_residual <= 1e-8 * (1.0 + dg.l1_norm), label + " reconstruction");
  const double gh = dg.g_norm * dg.h_norm;
  expect(dg.column_norm_a <= gh * (1.0 + 1e-6), label + " column estimate");
  expect(dg.row_norm_b <= gh * (1.0 + 1e-6), label + " row estimate");
  expect(dg.value <= 2.0 * dg.l1_norm * (1.0 + 1e-6), label + " end-to-end bound");
  double energy = 0.0;
  for (double e : dg.g_increment_energies) energy += e;
  expect(energy <= dg.g_norm * dg.g_norm * (1.0 + 1e-8), label + " energy budget");
  expect(dg.row_norm_b <= dg.b_cascade_pointwise + 1e-8 * (1.0 + gh), label + " cascade stage 1");
  expect(dg.b_cascade_pointwise <= dg.b_cascade_mid + 1e-8 * (1.0 + gh),
         label + " cascade stage 2");
  expect(dg.b_cascade_mid <= dg.b_cascade_outer + 1e-8 * (1.0 + gh), label + " cascade stage 3");
}

void suite_construct() {
  InstanceSpec ks;
  ks.kind = InstanceKind::khintchine;
  ks.dim = 2;
  ks.terms = 3;
  ks.seed = 21;
  const Instance ki = gen_instance(ks);
  const Splitting kh = khintchine_split(ki.dyadic, ks.terms);
  check_splitting(kh, "khintchine");
  expect(khintchine_a_form_gap(ki.dyadic, ks.terms) <= 1e-8, "khintchine a-form");

  InstanceSpec p2;
  p2.kind = InstanceKind::paley2;
  p2.dim = 2;
  p2.terms = 3;
  p2.seed = 22;
  const Instance i2 = gen_instance(p2);
  const Splitting s2 = paley_case2_split(i2.trig, i2.kset);
  check_splitting(s2, "paley2");
  expect(paley2_a_form_gap(i2.trig, i2.kset) <= 1e-8, "paley2 a-form");

  InstanceSpec p1;
  p1.kind = InstanceKind::paley1;
  p1.dim = 2;
  p1.terms = 3;
  p1.seed = 23;
  const Instance i1 = gen_instance(p1);
  const Splitting s1 = paley_case1_split(i1.trig, i1.kset, i1.tail_depth);
  check_splitting(s1, "paley1");
  expect(s1.a.items[0].cwiseAbs().maxCoeff() <= 1e-10, "paley1 a_0 vanishes");

  const auto pair = generic_factor(i2.trig);
  const ModuleSpan span = build_module_span(pair.h, paley2_image_chars(i2.kset, 1));
  std::mt19937_64 rng(24);
  std::vector<std::pair<long, MatrixC>> cf{{0, gauss_matrix(rng, 2, 1.0)},
                                           {2, gauss_matrix(rng, 2, 1.0)}};
  std::vector<std::pair<long, MatrixC>> cg{{1, gauss_matrix(rng, 2, 1.0)},
                                           {-1, gauss_matrix(rng, 2, 1.0)}};
  const TrigFn fprobe = synth_trig(2, i2.trig.gridsize, 4, cf);
  const TrigFn gprobe = synth_trig(2, i2.trig.gridsize, 4, cg);
  expect(partial_adjointness_gap(span, fprobe, gprobe) <= 1e-8, "partial adjointness");
}

}  // namespace

int selftest(std::ostream& out) {
  int failures = 0;
  const auto run = [&](const char* name, void (*fn)()) {
    try {
      fn();
      out << "ok " << name << "\n";
    } catch (const std::exception& e) {
      ++failures;
      out << "FAIL " << name << ": " << e.what() << "\n";
    }
  };
  run("matrix_core", suite_matrix_core);
  run("opfunc", suite_opfunc);
  run("factorize", suite_factorize);
  run("seqnorm", suite_seqnorm);
  run("construct", suite_construct);
  run("harness", [] {
    const LacunarySet k = gen_lacunary(0, 3, 1);
    expect(k.elements == std::vector<long>{1, 3, 7, 15}, "zero-jitter lacunary ladder");
    InstanceSpec spec;
    spec.kind = InstanceKind::steinhaus;
    spec.dim = 2;
    spec.terms = 3;
    spec.seed = 31;
    const ReportRow r1 = run_one(spec);
    const ReportRow r2 = run_one(spec);
    expect(row_to_json(r1).dump() == row_to_json(r2).dump(), "row determinism");
    expect(r1.ok() && r1.invariants_hold(), "steinhaus row invariants");
  });
  out << (failures == 0 ? "selftest: ok\n" : "selftest: FAIL\n");
  return failures;
}

}  // namespace ncx
