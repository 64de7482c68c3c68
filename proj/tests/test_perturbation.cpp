#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "support.hpp"
#include "wielandt/inequalities.hpp"
#include "wielandt/perturbation.hpp"

using namespace wielandt;
using testsupport::diag;

TEST_CASE("rates of the worked diagonal pair") {
  auto a = diag({3, 1, 1});
  auto b = diag({0, 2, 1});
  auto rates = first_order_rates(a, b);
  CHECK(testsupport::max_abs_diff(rates.nu, {0, 2, 1}) <= 1e-12);
  // adapted frame realizes nu_j as a Rayleigh quotient and keeps A-residuals
  for (int j = 0; j < 3; ++j) {
    auto u = rates.adapted_frame.vectors().col(j);
    CHECK(std::abs(u.dot(b.mat() * u).real() - rates.nu(j)) <= 1e-12);
    CHECK((a.mat() * u - rates.base[j] * u).norm() <=
          scaled_residual_tol(1e-8, a, b));
  }
}

TEST_CASE("distinct eigenvalues give plain Rayleigh quotients") {
  auto a = random_hermitian(5, 11, std::vector<double>{4, 3, 2, 1, 0});
  auto b = random_hermitian(5, 12);
  auto rates = first_order_rates(a, b);
  auto ed = eigh(a);
  for (int j = 0; j < 5; ++j) {
    auto u = ed.frame.vectors().col(j);
    CHECK(std::abs(rates.nu(j) - u.dot(b.mat() * u).real()) <= 1e-10);
  }
}

TEST_CASE("identity base matrix gives the perturbation spectrum") {
  auto b = random_hermitian(4, 3);
  auto rates = first_order_rates(HermitianMatrix::identity(4), b);
  auto sp = eigh(b).spectrum;
  CHECK((rates.nu - sp.values()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(rates.clusters.count() == 1);
}

TEST_CASE("rate_consistency_check on diagonal, zero, and random pairs") {
  CHECK(rate_consistency_check(diag({3, 1, 1}), diag({0, 2, 1}), 1e-5) <= 1e-4);
  auto a = random_hermitian(4, 17);
  CHECK(rate_consistency_check(a, HermitianMatrix::zero(4), 1e-5) <= 1e-15);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto ra = random_hermitian(6, 3000 + seed);
    auto rb = random_hermitian(6, 4000 + seed);
    CHECK(rate_consistency_check(ra, rb, 1e-5) <= 1e-3);
  }
}

TEST_CASE("rates are majorized by the perturbation spectrum") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    // mix degenerate and generic base matrices
    HermitianMatrix a =
        seed % 2 == 0
            ? random_hermitian(6, 100 + seed, std::vector<double>{3, 3, 1, 1, 1, 0})
            : random_hermitian(6, 100 + seed);
    auto b = random_hermitian(6, 500 + seed);
    auto rates = first_order_rates(a, b);
    auto sp_b = eigh(b).spectrum;
    std::vector<double> nu(rates.nu.data(), rates.nu.data() + 6);
    std::vector<double> lb(sp_b.values().data(), sp_b.values().data() + 6);
    auto rep = majorizes(nu, lb, 1e-10);
    CHECK(rep.holds);
    for (double m : rep.prefix_margins) CHECK(m >= -1e-8);
    CHECK(rep.total_gap <= 1e-10 * (1 + b.frobenius()));
  }
}

TEST_CASE("scale equivariance of the rates") {
  auto a = random_hermitian(5, 42, std::vector<double>{2, 1, 1, 0, 0});
  auto b = random_hermitian(5, 43);
  auto base = first_order_rates(a, b);

  auto up = first_order_rates(a, scale(b, 2.5));
  CHECK((up.nu - 2.5 * base.nu).cwiseAbs().maxCoeff() <= 1e-10);

  // negative scaling reverses the within-cluster order
  auto neg = first_order_rates(a, scale(b, -1.5));
  for (int c = 0; c < base.clusters.count(); ++c) {
    const int lo = base.clusters.begin(c);
    const int m = base.clusters.multiplicity(c);
    for (int j = 0; j < m; ++j)
      CHECK(std::abs(neg.nu(lo + j) - (-1.5) * base.nu(lo + m - 1 - j)) <= 1e-10);
  }
}

TEST_CASE("shift invariance of the rates") {
  auto a = random_hermitian(5, 77, std::vector<double>{2, 2, 1, 0, -1});
  auto b = random_hermitian(5, 78);
  auto base = first_order_rates(a, b);
  auto shifted = first_order_rates(pencil_at(a, HermitianMatrix::identity(5), 3.0), b);
  CHECK((base.nu - shifted.nu).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(base.clusters.boundaries == shifted.clusters.boundaries);
}

TEST_CASE("commuting pairs: per-cluster rates are the matching eigenvalues") {
  Rng rng(5);
  Matrix q = random_unitary(6, rng);
  Vector av(6), bv(6);
  av << 3, 3, 1, 1, 1, 0;  // clusters of sizes 2, 3, 1
  bv << 5, 2, 7, 4, 1, 6;
  auto a = HermitianMatrix(q * av.cast<Complex>().asDiagonal() * q.adjoint());
  auto b = HermitianMatrix(q * bv.cast<Complex>().asDiagonal() * q.adjoint());
  auto rates = first_order_rates(a, b);
  REQUIRE(rates.clusters.count() == 3);
  const std::vector<std::vector<double>> expect{{5, 2}, {7, 4, 1}, {6}};
  for (int c = 0; c < 3; ++c) {
    std::vector<double> want = expect[c];
    std::sort(want.begin(), want.end(), std::greater<double>());
    for (int j = 0; j < rates.clusters.multiplicity(c); ++j)
      CHECK(std::abs(rates.nu(rates.clusters.begin(c) + j) - want[j]) <= 1e-9);
  }
}

TEST_CASE("trace of the rates equals the trace of the perturbation") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto a = random_hermitian(6, 600 + seed, std::vector<double>{1, 1, 1, 0, 0, -2});
    auto b = random_hermitian(6, 700 + seed);
    auto rates = first_order_rates(a, b);
    CHECK(std::abs(rates.nu.sum() - b.mat().trace().real()) <=
          1e-10 * (1 + b.frobenius()));
  }
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(first_order_rates(diag({1, 0}), diag({1, 2, 3})),
                  DimensionMismatch);
}
