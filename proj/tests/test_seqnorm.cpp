#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "common.hpp"
#include "doctest.h"
#include "ncx/seqnorm.hpp"

using namespace ncx;
using testutil::gmat;
using testutil::max_abs_diff;

namespace {

OpSequence scalar_seq(std::initializer_list<double> xs) {
  std::vector<MatrixC> items;
  for (double x : xs) items.push_back(MatrixC::Constant(1, 1, x));
  return OpSequence(1, std::move(items));
}

OpSequence random_seq(std::mt19937_64& rng, int d, int len, double scale = 1.0) {
  std::vector<MatrixC> items;
  for (int j = 0; j < len; ++j) items.push_back(gmat(rng, d, scale));
  return OpSequence(d, std::move(items));
}

}  // namespace

TEST_CASE("column_norm on pinned sequences") {
  CHECK(column_norm(OpSequence(2, {MatrixC::Identity(2, 2)})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(column_norm(scalar_seq({3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-12));

  MatrixC e00 = MatrixC::Zero(2, 2);
  e00(0, 0) = 1.0;
  MatrixC e11 = MatrixC::Zero(2, 2);
  e11(1, 1) = 1.0;
  CHECK(column_norm(OpSequence(2, {e00, e11})) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("row_norm on pinned sequences") {
  std::mt19937_64 rng(41);
  const MatrixC c0 = gmat(rng, 3);
  CHECK(row_norm(OpSequence(3, {c0})) ==
        doctest::Approx(schatten_norm(c0, 1.0)).epsilon(1e-10));
  CHECK(column_norm(OpSequence(3, {c0})) ==
        doctest::Approx(schatten_norm(c0, 1.0)).epsilon(1e-10));
}

TEST_CASE("row_norm equals column_norm of adjoints and on Hermitian sequences") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const OpSequence c = random_seq(rng, d, 1 + static_cast<int>(rng() % 4));
    std::vector<MatrixC> adj;
    for (const MatrixC& m : c.items) adj.push_back(m.adjoint());
    CHECK(std::abs(row_norm(c) - column_norm(OpSequence(d, adj))) <= 1e-12 * (1.0 + row_norm(c)));

    std::vector<MatrixC> herm;
    for (const MatrixC& m : c.items) herm.push_back((m + m.adjoint()) / 2.0);
    const OpSequence hc(d, herm);
    CHECK(std::abs(row_norm(hc) - column_norm(hc)) <= 1e-12 * (1.0 + row_norm(hc)));
  }
}

TEST_CASE("splitting_value composes the two norms") {
  const OpSequence a = scalar_seq({3.0, 0.0});
  const OpSequence b = scalar_seq({0.0, 4.0});
  CHECK(splitting_value(a, b) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(splitting_value(a, scalar_seq({0.0, 0.0})) ==
        doctest::Approx(column_norm(a)).epsilon(1e-12));
  CHECK(splitting_value(scalar_seq({0.0, 0.0}), b) ==
        doctest::Approx(row_norm(b)).epsilon(1e-12));
  CHECK_THROWS_AS(splitting_value(a, scalar_seq({1.0})), domain_error);
}

TEST_CASE("norm axioms for column and row norms") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const int len = 1 + static_cast<int>(rng() % 4);
    const OpSequence c = random_seq(rng, d, len);
    const OpSequence e = random_seq(rng, d, len);
    const double lam = 0.25 + 3.0 * testutil::uniform01(rng);

    for (auto norm : {column_norm, row_norm}) {
      const double nc = norm(c);
      std::vector<MatrixC> scaled, summed;
      for (int j = 0; j < len; ++j) {
        scaled.push_back(MatrixC(lam * c.items[j]));
        summed.push_back(MatrixC(c.items[j] + e.items[j]));
      }
      CHECK(std::abs(norm(OpSequence(d, scaled)) - lam * nc) <= 1e-10 * (1.0 + lam * nc));
      const double rhs = nc + norm(e);
      CHECK(norm(OpSequence(d, summed)) <= rhs + 1e-10 * (1.0 + rhs));
    }
  }
  CHECK(column_norm(OpSequence(2, {MatrixC::Zero(2, 2)})) == 0.0);
  CHECK(row_norm(OpSequence(2, std::vector<MatrixC>{})) == 0.0);
}

TEST_CASE("column_norm grows along subsequences but not past the S1 sum") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const int len = 2 + static_cast<int>(rng() % 3);
    const OpSequence c = random_seq(rng, d, len);
    const OpSequence head(d, {c.items.begin(), c.items.end() - 1});
    CHECK(column_norm(head) <= column_norm(c) + 1e-10);
    CHECK(row_norm(head) <= row_norm(c) + 1e-10);
  }
  // The summed trace-norm bound fails: two identity items give 2*sqrt(2) < 4.
  const OpSequence twin(2, {MatrixC::Identity(2, 2), MatrixC::Identity(2, 2)});
  CHECK(column_norm(twin) == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-12));
  CHECK(column_norm(twin) < 4.0);
}

TEST_CASE("scalar_oracle on pinned sequences") {
  CHECK(scalar_oracle(scalar_seq({3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(scalar_oracle(scalar_seq({1.0})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scalar_oracle(scalar_seq({1.0, 1.0})) ==
        doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
  CHECK_THROWS_AS(scalar_oracle(OpSequence(2, {MatrixC::Identity(2, 2)})), domain_error);
}

TEST_CASE("dual_lower_bound on pinned sequences") {
  const OpSequence c = scalar_seq({3.0, 4.0});
  CHECK(dual_lower_bound(c, c) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(dual_lower_bound(c, scalar_seq({0.0, 0.0})) == 0.0);
  CHECK_THROWS_AS(dual_lower_bound(c, scalar_seq({1.0})), domain_error);
}

TEST_CASE("weak duality against arbitrary feasible splittings") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const int len = 1 + static_cast<int>(rng() % 4);
    const OpSequence c = random_seq(rng, d, len);
    const OpSequence x = random_seq(rng, d, len);
    const OpSequence a = random_seq(rng, d, len, 0.7);
    std::vector<MatrixC> rest;
    for (int j = 0; j < len; ++j) rest.push_back(MatrixC(c.items[j] - a.items[j]));
    const double primal = splitting_value(a, OpSequence(d, rest));
    CHECK(dual_lower_bound(c, x) <= primal + 1e-8 * (1.0 + primal));
  }
}

TEST_CASE("triple_norm_solve on pinned sequences") {
  const SplitCertificate five = triple_norm_solve(scalar_seq({3.0, 4.0}));
  CHECK(std::abs(five.value - 5.0) <= 1e-4 * 6.0);
  CHECK(five.converged);

  std::mt19937_64 rng(46);
  const MatrixC c0 = gmat(rng, 3);
  const SplitCertificate single = triple_norm_solve(OpSequence(3, {c0}));
  CHECK(std::abs(single.value - schatten_norm(c0, 1.0)) <= 1e-9 * (1.0 + single.value));

  const SplitCertificate zero = triple_norm_solve(OpSequence(2, {MatrixC::Zero(2, 2)}));
  CHECK(zero.value == 0.0);
  CHECK(zero.dual_lower == 0.0);
  CHECK(zero.converged);
}

TEST_CASE("certificates are feasible, bounded, and dominated by warm starts") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const int len = 1 + static_cast<int>(rng() % 4);
    const OpSequence c = random_seq(rng, d, len);
    const OpSequence warm = random_seq(rng, d, len, 0.5);
    std::vector<MatrixC> rest;
    for (int j = 0; j < len; ++j) rest.push_back(MatrixC(c.items[j] - warm.items[j]));
    const double warm_value = splitting_value(warm, OpSequence(d, rest));

    const SplitCertificate cert = triple_norm_solve(c, {}, warm);
    for (int j = 0; j < len; ++j) {
      CHECK(max_abs_diff(MatrixC(cert.a.items[j] + cert.b.items[j]), c.items[j]) <= 1e-10);
    }
    CHECK(cert.dual_lower <= cert.value + 1e-9 * (1.0 + cert.value));
    CHECK(cert.value <= warm_value + 1e-12 * (1.0 + warm_value));
    CHECK(cert.value <= std::min(column_norm(c), row_norm(c)) + 1e-9);
    CHECK(splitting_value(cert.a, cert.b) == doctest::Approx(cert.value).epsilon(1e-12));
  }
}

TEST_CASE("solver matches the scalar oracle") {
  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 50; ++trial) {
    const int len = 1 + static_cast<int>(rng() % 8);
    const OpSequence c = random_seq(rng, 1, len);
    const double oracle = scalar_oracle(c);
    const SplitCertificate cert = triple_norm_solve(c);
    CHECK(std::abs(cert.value - oracle) <= 1e-4 * (1.0 + oracle));
    CHECK(cert.dual_lower <= cert.value + 1e-9 * (1.0 + cert.value));
  }
}

TEST_CASE("solver keeps a small relative duality gap on matrix sequences") {
  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const int len = 2 + static_cast<int>(rng() % 3);
    const OpSequence c = random_seq(rng, d, len);
    const SplitCertificate cert = triple_norm_solve(c);
    CHECK(cert.dual_lower <= cert.value + 1e-9 * (1.0 + cert.value));
    CHECK(cert.value - cert.dual_lower <= 1e-2 * (1.0 + cert.value));
    CHECK(cert.value <= std::min(column_norm(c), row_norm(c)) + 1e-9);
  }
}

TEST_CASE("sequence JSON round trip") {
  std::mt19937_64 rng(50);
  const OpSequence c = random_seq(rng, 2, 3);
  const OpSequence c2 = sequence_from_json(nlohmann::json::parse(sequence_to_json(c).dump()));
  CHECK(c2.dim == c.dim);
  REQUIRE(c2.size() == c.size());
  for (long j = 0; j < c.size(); ++j) CHECK(max_abs_diff(c2.items[j], c.items[j]) == 0.0);
  CHECK_THROWS_AS(OpSequence(2, {MatrixC::Identity(3, 3)}), domain_error);
}
