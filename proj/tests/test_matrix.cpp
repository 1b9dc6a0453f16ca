#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "doctest.h"
#include "ncx/matrix.hpp"

using namespace ncx;
using testutil::gmat;
using testutil::max_abs_diff;
using testutil::psd;
using testutil::unitary;

namespace {

MatrixC m2(Complex a, Complex b, Complex c, Complex d) {
  MatrixC m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("svd on pinned matrices") {
  const SvdTriple id = svd(MatrixC::Identity(2, 2));
  CHECK(id.singulars[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.singulars[1] == doctest::Approx(1.0).epsilon(1e-12));

  MatrixC d34 = MatrixC::Zero(2, 2);
  d34(0, 0) = 3.0;
  d34(1, 1) = 4.0;
  const SvdTriple t = svd(d34);
  CHECK(t.singulars[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(t.singulars[1] == doctest::Approx(3.0).epsilon(1e-12));

  const SvdTriple n = svd(m2(0, 2, 0, 0));
  CHECK(n.singulars[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(n.singulars[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("svd reconstruction, ordering, unitarity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 5);
    const MatrixC a = gmat(rng, d);
    const SvdTriple t = svd(a);
    const double lead = t.singulars.size() ? t.singulars[0] : 0.0;
    CHECK(max_abs_diff(t.reconstruct(), a) <= 1e-10 * (1.0 + lead));
    CHECK(max_abs_diff(t.left.adjoint() * t.left, MatrixC::Identity(d, d)) <= 1e-10);
    CHECK(max_abs_diff(t.right.adjoint() * t.right, MatrixC::Identity(d, d)) <= 1e-10);
    for (Eigen::Index i = 0; i + 1 < t.singulars.size(); ++i) {
      CHECK(t.singulars[i] >= t.singulars[i + 1]);
      CHECK(t.singulars[i + 1] >= 0.0);
    }
  }
}

TEST_CASE("schatten_norm on pinned matrices") {
  CHECK(schatten_norm(MatrixC::Identity(2, 2), 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  MatrixC d34 = MatrixC::Zero(2, 2);
  d34(0, 0) = 3.0;
  d34(1, 1) = 4.0;
  CHECK(schatten_norm(d34, 1.0) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(schatten_norm(m2(1, 1, 1, 1), 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(schatten_norm(MatrixC::Identity(2, 2), 0.0), domain_error);
  CHECK_THROWS_AS(schatten_norm(MatrixC::Identity(2, 2), -1.0), domain_error);
}

TEST_CASE("schatten_norm invariants") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    const MatrixC a = gmat(rng, d);
    const MatrixC b = gmat(rng, d);

    // Trace-norm identity against the PSD square root.
    const double s1 = schatten_norm(a, 1.0);
    CHECK(std::abs(s1 - trace(sqrt_psd(a.adjoint() * a)).real()) <= 1e-8 * (1.0 + s1));

    // Unitary invariance on both sides.
    const MatrixC u = unitary(rng, d);
    const MatrixC v = unitary(rng, d);
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
      const double np = schatten_norm(a, p);
      CHECK(std::abs(schatten_norm(u * a * v, p) - np) <= 1e-8 * (1.0 + np));
    }

    // Triangle inequality for p >= 1 only.
    for (double p : {1.0, 2.0, 4.0}) {
      const double lhs = schatten_norm(a + b, p);
      const double rhs = schatten_norm(a, p) + schatten_norm(b, p);
      CHECK(lhs <= rhs + 1e-10 * (1.0 + rhs));
    }
  }
}

TEST_CASE("trace on pinned matrices") {
  CHECK(trace(MatrixC::Identity(3, 3)).real() == doctest::Approx(3.0));
  CHECK(std::abs(trace(m2(0, 1, 0, 0))) <= 1e-15);
  CHECK(trace(m2(1, 2, 3, 4)).real() == doctest::Approx(5.0));
}

TEST_CASE("sqrt_psd on pinned matrices") {
  MatrixC d49 = MatrixC::Zero(2, 2);
  d49(0, 0) = 4.0;
  d49(1, 1) = 9.0;
  MatrixC d23 = MatrixC::Zero(2, 2);
  d23(0, 0) = 2.0;
  d23(1, 1) = 3.0;
  CHECK(max_abs_diff(sqrt_psd(d49), d23) <= 1e-12);

  CHECK(testutil::max_abs(sqrt_psd(MatrixC::Zero(2, 2))) <= 1e-15);

  // Eigenvalues of [[2,1],[1,2]] are 3 and 1 on (1,1)/sqrt2 and (1,-1)/sqrt2.
  const double hi = (std::numbers::sqrt3 + 1.0) / 2.0;
  const double lo = (std::numbers::sqrt3 - 1.0) / 2.0;
  CHECK(max_abs_diff(sqrt_psd(m2(2, 1, 1, 2)), m2(hi, lo, lo, hi)) <= 1e-12);

  CHECK_THROWS_AS(sqrt_psd(m2(0, 1, 0, 0)), domain_error);
  MatrixC neg = MatrixC::Zero(2, 2);
  neg(0, 0) = 1.0;
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(sqrt_psd(neg), domain_error);
}

TEST_CASE("sqrt_psd squares back") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    const MatrixC a = psd(rng, d);
    const MatrixC r = sqrt_psd(a);
    CHECK(max_abs_diff(r * r, a) <= 1e-8 * (1.0 + testutil::max_abs(a)));
    CHECK(max_abs_diff(r, r.adjoint()) <= 1e-12 * (1.0 + testutil::max_abs(r)));
  }
}

TEST_CASE("factor_unit_ball on pinned matrices") {
  MatrixC d40 = MatrixC::Zero(2, 2);
  d40(0, 0) = 4.0;
  MatrixC d20 = MatrixC::Zero(2, 2);
  d20(0, 0) = 2.0;
  const auto [b0, c0] = factor_unit_ball(d40);
  CHECK(max_abs_diff(b0, d20) <= 1e-12);
  CHECK(max_abs_diff(c0, d20) <= 1e-12);

  const auto [bz, cz] = factor_unit_ball(MatrixC::Zero(2, 2));
  CHECK(testutil::max_abs(bz) <= 1e-15);
  CHECK(testutil::max_abs(cz) <= 1e-15);

  const MatrixC nil = m2(0, 1, 0, 0);
  const auto [bn, cn] = factor_unit_ball(nil);
  CHECK(max_abs_diff(bn.adjoint() * cn, nil) <= 1e-10);
  CHECK(schatten_norm(bn, 2.0) * schatten_norm(bn, 2.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("factor_unit_ball round-trip and balance") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    const MatrixC a = gmat(rng, d);
    const auto [b, c] = factor_unit_ball(a);
    const double s1 = schatten_norm(a, 1.0);
    CHECK(max_abs_diff(b.adjoint() * c, a) <= 1e-10 * (1.0 + s1));
    const double nb = schatten_norm(b, 2.0);
    const double nc = schatten_norm(c, 2.0);
    CHECK(std::abs(nb * nb - s1) <= 1e-8 * (1.0 + s1));
    CHECK(std::abs(nc * nc - s1) <= 1e-8 * (1.0 + s1));
  }
}

TEST_CASE("hoelder_gap on pinned matrices") {
  CHECK(std::abs(hoelder_gap(MatrixC::Identity(2, 2), MatrixC::Identity(2, 2), 2.0, 2.0)) <=
        1e-12);
  MatrixC e00 = MatrixC::Zero(2, 2);
  e00(0, 0) = 1.0;
  MatrixC e11 = MatrixC::Zero(2, 2);
  e11(1, 1) = 1.0;
  // Product vanishes, so the gap equals the norm product.
  CHECK(hoelder_gap(e00, e11, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(hoelder_gap(e00, e11, 0.0, 1.0), domain_error);
}

TEST_CASE("hoelder_gap is nonnegative across exponent pairs") {
  std::mt19937_64 rng(15);
  const std::pair<double, double> pq[] = {{2.0, 2.0}, {2.0, 1.0}, {4.0, 4.0 / 3.0}, {2.0, 2.0 / 3.0}};
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const MatrixC a = gmat(rng, d);
    const MatrixC b = gmat(rng, d);
    const auto& [p, q] = pq[trial % 4];
    const double scale = schatten_norm(a, p) * schatten_norm(b, q);
    CHECK(hoelder_gap(a, b, p, q) >= -1e-10 * (1.0 + scale));
  }
}
