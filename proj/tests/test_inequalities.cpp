#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "wielandt/equality.hpp"
#include "wielandt/inequalities.hpp"

using namespace wielandt;
using testsupport::diag;
using testsupport::mat2;

TEST_CASE("IndexSet validates its invariants") {
  CHECK_THROWS_AS(IndexSet(3, {}), IndexOutOfRange);
  CHECK_THROWS_AS(IndexSet(3, {1, 2, 3}), IndexOutOfRange);  // k = n
  CHECK_THROWS_AS(IndexSet(3, {2, 2}), IndexOutOfRange);
  CHECK_THROWS_AS(IndexSet(3, {0}), IndexOutOfRange);
  CHECK_THROWS_AS(IndexSet(3, {4}), IndexOutOfRange);
  CHECK(IndexSet(3, {1, 3}).k() == 2);
}

TEST_CASE("wielandt_check on the worked diagonal pair") {
  auto rep = wielandt_check(diag({3, 1, 1}), diag({0, 2, 1}), IndexSet(3, {3}));
  CHECK(rep.lhs == doctest::Approx(2.0));  // A+B = diag(3,3,2)
  CHECK(rep.rhs == doctest::Approx(3.0));
  CHECK(rep.slack == doctest::Approx(1.0));
  CHECK(rep.verdict == Verdict::Holds);
}

TEST_CASE("zero perturbation gives equality for every index set") {
  auto a = random_hermitian(4, 9);
  auto z = HermitianMatrix::zero(4);
  for (const auto& rep : wielandt_scan(a, z)) {
    CHECK(std::abs(rep.slack) <= 1e-10 * (1 + a.frobenius()));
    CHECK(rep.verdict == Verdict::Equality);
  }
}

TEST_CASE("random pairs satisfy the inequality over the full scan") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    auto a = random_hermitian(n, 1000 + seed);
    auto b = random_hermitian(n, 2000 + seed);
    for (const auto& rep : wielandt_scan(a, b)) CHECK(rep.slack >= -1e-8);
  }
}

TEST_CASE("aligned diagonal pair produces zero-slack leading sets") {
  auto a = diag({3, 2, 1});
  auto reports = wielandt_scan(a, a);
  CHECK(reports.size() == 6);  // C(3,1) + C(3,2)
  // sorted ascending by slack
  for (size_t i = 0; i + 1 < reports.size(); ++i)
    CHECK(reports[i].slack <= reports[i + 1].slack + 1e-15);
  int zero_count = 0;
  for (const auto& rep : reports) {
    bool is_se1 = rep.indices.indices() == std::vector<int>{1};
    bool is_se12 = rep.indices.indices() == std::vector<int>{1, 2};
    if (is_se1 || is_se12) {
      CHECK(std::abs(rep.slack) <= 1e-12);
      CHECK(rep.verdict == Verdict::Equality);
      ++zero_count;
    }
  }
  CHECK(zero_count == 2);
}

TEST_CASE("scan rejects dimensions above the cap") {
  auto a = random_hermitian(15, 1);
  auto b = random_hermitian(15, 2);
  CHECK_THROWS_AS(wielandt_scan(a, b), ScanTooLarge);
}

TEST_CASE("scan restricted to a k range") {
  auto a = random_hermitian(4, 44);
  auto b = random_hermitian(4, 45);
  auto only_singletons = wielandt_scan(a, b, std::make_pair(1, 1));
  CHECK(only_singletons.size() == 4);
  for (const auto& rep : only_singletons) CHECK(rep.indices.k() == 1);
  auto pairs_up = wielandt_scan(a, b, std::make_pair(2, 3));
  CHECK(pairs_up.size() == 6 + 4);  // C(4,2) + C(4,3)
}

TEST_CASE("majorizes on the golden-ratio example and simple cases") {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  auto rep = majorizes({phi - 1.0, 1.0 - phi}, {1.0, -1.0});
  CHECK(rep.holds);

  CHECK(majorizes({0.5, 0.2}, {0.5, 0.2}).holds);
  CHECK_FALSE(majorizes({2, -2}, {1, -1}).holds);
  CHECK_THROWS_AS(majorizes({1, 2}, {1}), LengthMismatch);
}

TEST_CASE("lidskii_check on the golden-ratio pair") {
  auto rep = lidskii_check(diag({1, 0}), mat2(0, 1, 1, 0));
  CHECK(rep.holds);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  // first margin: 1 - (phi - 1)
  CHECK(rep.prefix_margins[0] == doctest::Approx(2.0 - phi));
  CHECK(rep.total_gap <= 1e-12);
}

TEST_CASE("scalar perturbation gives equality in every prefix") {
  auto a = random_hermitian(4, 33);
  auto rep = lidskii_check(a, scale(HermitianMatrix::identity(4), 0.7));
  CHECK(rep.holds);
  for (double m : rep.prefix_margins) CHECK(std::abs(m) <= 1e-10);
}

TEST_CASE("random pairs satisfy the majorization") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto a = random_hermitian(8, 5000 + seed);
    auto b = random_hermitian(8, 6000 + seed);
    auto rep = lidskii_check(a, b);
    CHECK(rep.holds);
    for (double m : rep.prefix_margins) CHECK(m >= -1e-8);
  }
}

TEST_CASE("scan minimum and majorization margins agree in sign") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    HermitianMatrix a = HermitianMatrix::identity(1), b = a;
    if (seed % 2 == 0) {
      a = random_hermitian(5, 100 + seed);
      b = random_hermitian(5, 200 + seed);
    } else {
      auto inst = make_equality_block_instance(5, 2, 300 + seed);
      a = inst.a;
      b = inst.b;
    }
    auto reports = wielandt_scan(a, b);
    double min_slack = reports.front().slack;
    auto lid = lidskii_check(a, b);
    double min_margin = 0.0;
    for (double m : lid.prefix_margins) min_margin = std::min(min_margin, m);
    const double band = scaled_residual_tol(1e-8, a, b);
    CHECK((min_slack >= -band) == (min_margin >= -band));
  }
}

TEST_CASE("reports are invariant under joint unitary conjugation") {
  Rng rng(12);
  auto a = random_hermitian(5, 61);
  auto b = random_hermitian(5, 62);
  Matrix q = random_unitary(5, rng);
  auto aq = HermitianMatrix(q * a.mat() * q.adjoint());
  auto bq = HermitianMatrix(q * b.mat() * q.adjoint());
  IndexSet s(5, {2, 4});
  auto r1 = wielandt_check(a, b, s);
  auto r2 = wielandt_check(aq, bq, s);
  const double band = 1e-8 * (1 + a.frobenius() + b.frobenius());
  CHECK(std::abs(r1.lhs - r2.lhs) <= band);
  CHECK(std::abs(r1.rhs - r2.rhs) <= band);
}

TEST_CASE("shifting the perturbation moves both sides but not the slack") {
  auto a = random_hermitian(5, 71);
  auto b = random_hermitian(5, 72);
  const double c = 1.3;
  auto bshift = pencil_at(b, HermitianMatrix::identity(5), c);
  IndexSet s(5, {1, 4});
  auto r1 = wielandt_check(a, b, s);
  auto r2 = wielandt_check(a, bshift, s);
  CHECK(std::abs(r2.lhs - (r1.lhs + s.k() * c)) <= 1e-9);
  CHECK(std::abs(r2.rhs - (r1.rhs + s.k() * c)) <= 1e-9);
  CHECK(std::abs(r2.slack - r1.slack) <= 1e-9);
}
