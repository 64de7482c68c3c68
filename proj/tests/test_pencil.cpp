#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "wielandt/pencil.hpp"

using namespace wielandt;
using testsupport::diag;

namespace {

bool has_crossing_near(const PencilTrace& trace, double t, double tol) {
  for (const Crossing& c : trace.crossings)
    if (std::abs(c.t - t) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("diagonal crossing pencil: curves and crossing location") {
  auto a = diag({1, 0});
  auto b = diag({-1, 1});
  auto trace = trace_pencil(a, b, 0.0, 1.0, 101);
  REQUIRE(trace.n() == 2);
  for (int g = 0; g < trace.samples(); ++g) {
    const double t = trace.grid[g];
    CHECK(std::abs(trace.curves[g](0) - std::max(1.0 - t, t)) <= 1e-12);
    CHECK(std::abs(trace.curves[g](1) - std::min(1.0 - t, t)) <= 1e-12);
  }
  REQUIRE(trace.crossings.size() == 1);
  CHECK(std::abs(trace.crossings[0].t - 0.5) <= 1e-7);
  CHECK(trace.crossings[0].pairs ==
        std::vector<std::pair<int, int>>{{1, 2}});
}

TEST_CASE("zero direction: constant curves, no crossings") {
  auto a = random_hermitian(4, 10);
  auto trace = trace_pencil(a, HermitianMatrix::zero(4), 0.0, 1.0, 33);
  CHECK(trace.crossings.empty());
  for (int g = 1; g < trace.samples(); ++g)
    CHECK((trace.curves[g] - trace.curves[0]).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("worked diagonal pair on [0,2]: kink values and the interior crossing") {
  auto a = diag({3, 1, 1});
  auto b = diag({0, 2, 1});
  auto trace = trace_pencil(a, b, 0.0, 2.0, 101);
  CHECK(has_crossing_near(trace, 1.0, 1e-6));
  // before the crossing the second curve is 1 + 2t, after it is the constant 3
  for (int g = 0; g < trace.samples(); ++g) {
    const double t = trace.grid[g];
    if (std::abs(t - 0.5) < 1e-9) CHECK(trace.curves[g](1) == doctest::Approx(2.0));
    if (std::abs(t - 1.5) < 1e-9) {
      CHECK(trace.curves[g](0) == doctest::Approx(4.0));  // 1 + 2t
      CHECK(trace.curves[g](1) == doctest::Approx(3.0));
    }
  }
  // coincidences at t = 0 (the repeated pair of A) and t = 2 (1 + t meets 3)
  CHECK(has_crossing_near(trace, 0.0, 1e-6));
  CHECK(has_crossing_near(trace, 2.0, 1e-6));
}

TEST_CASE("identical curve pairs are branches, not crossings") {
  // A + tB = diag(1+t, 1+t, -t): the top pair is one double branch
  auto trace = trace_pencil(diag({1, 1, 0}), diag({1, 1, -1}), 0.0, 1.0, 51);
  CHECK(trace.crossings.empty());
  CHECK(trace.pair_min_gaps[0] <= 1e-12);

  // A + tB = diag(1-t, 1-t, t): double branch meets the single one at 0.5
  auto trace2 = trace_pencil(diag({1, 1, 0}), diag({-1, -1, 1}), 0.0, 1.0, 51);
  REQUIRE(trace2.crossings.size() == 1);
  CHECK(std::abs(trace2.crossings[0].t - 0.5) <= 1e-7);
}

TEST_CASE("match_frames: identity, phases, and a crossing transposition") {
  Rng rng(3);
  Matrix q = random_unitary(5, rng);
  Vector vals(5);
  vals << 4, 3, 2, 1, 0;
  auto clusters = cluster_spectrum(Spectrum::from_sorted(vals));
  auto f = OrthonormalFrame::trusted(q);

  auto same = match_frames(f, f, clusters, clusters);
  CHECK(same.score == doctest::Approx(5.0));
  for (int i = 0; i < 5; ++i) CHECK(same.permutation[i] == i);

  Matrix qp = q;
  for (int c = 0; c < 5; ++c) qp.col(c) *= std::polar(1.0, 0.3 + 0.4 * c);
  auto phased = match_frames(f, OrthonormalFrame::trusted(qp), clusters, clusters);
  CHECK(phased.score == doctest::Approx(5.0));
  for (int i = 0; i < 5; ++i) CHECK(phased.permutation[i] == i);

  // two samples straddling the crossing of diag(1,0) + t diag(-1,1)
  auto a = diag({1, 0});
  auto b = diag({-1, 1});
  const double d = 1e-10;
  auto prev = eigh(pencil_at(a, b, 0.5 - d));
  auto next = eigh(pencil_at(a, b, 0.5 + d));
  auto pc = cluster_spectrum(prev.spectrum);
  auto nc = cluster_spectrum(next.spectrum);
  REQUIRE(nc.count() == 1);  // nearly degenerate at the crossing
  auto fm = match_frames(prev.frame, next.frame, pc, nc);
  CHECK(fm.permutation == std::vector<int>{1, 0});
  CHECK(fm.score == doctest::Approx(2.0));
}

TEST_CASE("derivative_at: definitional, commuting, and crossing cases") {
  auto a3 = diag({3, 1, 1});
  auto b3 = diag({0, 2, 1});
  Vector right0 = derivative_at(a3, b3, 0.0, Side::Right);
  CHECK(testsupport::max_abs_diff(right0, {0, 2, 1}) <= 1e-12);

  auto a = diag({1, 0});
  auto b = diag({-1, 1});
  // away from the crossing both sides agree with the matched diagonal of B
  Vector r = derivative_at(a, b, 0.3, Side::Right);
  Vector l = derivative_at(a, b, 0.3, Side::Left);
  CHECK(testsupport::max_abs_diff(r, {-1, 1}) <= 1e-12);
  CHECK((r - l).cwiseAbs().maxCoeff() <= 1e-9);

  Vector rc = derivative_at(a, b, 0.5, Side::Right);
  Vector lc = derivative_at(a, b, 0.5, Side::Left);
  CHECK(testsupport::max_abs_diff(rc, {1, -1}) <= 1e-12);
  CHECK(testsupport::max_abs_diff(lc, {-1, 1}) <= 1e-12);
}

TEST_CASE("phi_curve: full set is affine, singleton has the kink, constant for B=0") {
  auto a = random_hermitian(4, 91);
  auto b = random_hermitian(4, 92);
  auto trace = trace_pencil(a, b, 0.0, 1.0, 41);
  // the full-sum phi over any (n-1)-subset plus the last curve is the trace;
  // check trace linearity directly on the row sums
  const double tra = a.mat().trace().real();
  const double trb = b.mat().trace().real();
  for (int g = 0; g < trace.samples(); ++g)
    CHECK(std::abs(trace.curves[g].sum() - (tra + trace.grid[g] * trb)) <=
          1e-10 * (1 + a.frobenius() + b.frobenius()));

  auto cross = trace_pencil(diag({1, 0}), diag({-1, 1}), 0.0, 1.0, 41);
  auto phi = phi_curve(cross, IndexSet(2, {1}));
  for (int g = 0; g < cross.samples(); ++g)
    CHECK(std::abs(phi[g] - std::max(1.0 - cross.grid[g], cross.grid[g])) <= 1e-12);

  auto flat = trace_pencil(a, HermitianMatrix::zero(4), 0.0, 1.0, 11);
  auto cphi = phi_curve(flat, IndexSet(4, {2, 3}));
  for (double v : cphi) CHECK(v == doctest::Approx(cphi[0]));
}

TEST_CASE("integrate_phi_prime: trace slope, crossing cancellation, endpoint match") {
  auto a = random_hermitian(4, 55);
  auto b = random_hermitian(4, 56);
  // phi' summed over all but one index plus the remaining curve integrates
  // trace linearity; use the closed-form via an (n-1)-set and its complement
  IndexSet top3(4, {1, 2, 3});
  double got = integrate_phi_prime(a, b, top3, 0.0, 1.0);
  auto sp0 = eigh(a).spectrum;
  auto sp1 = eigh(a + b).spectrum;
  double expect = 0.0;
  for (int i : top3.indices()) expect += sp1[i - 1] - sp0[i - 1];
  CHECK(std::abs(got - expect) <= 1e-6);

  double zero = integrate_phi_prime(diag({1, 0}), diag({-1, 1}),
                                    IndexSet(2, {1}), 0.0, 1.0);
  CHECK(std::abs(zero) <= 1e-8);

  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto ra = random_hermitian(5, 7000 + seed);
    auto rb = random_hermitian(5, 8000 + seed);
    IndexSet s(5, {2, 4});
    double integral = integrate_phi_prime(ra, rb, s, 0.0, 1.0);
    auto e0 = eigh(ra).spectrum;
    auto e1 = eigh(ra + rb).spectrum;
    double diff = 0.0;
    for (int i : s.indices()) diff += e1[i - 1] - e0[i - 1];
    CHECK(std::abs(integral - diff) <= 1e-6);
  }
}

TEST_CASE("traced curves obey the Lipschitz bound and re-solve exactly") {
  auto a = random_hermitian(5, 301);
  auto b = random_hermitian(5, 302);
  auto trace = trace_pencil(a, b, 0.0, 1.0, 65);
  const double bnorm = eigh(b).spectrum.max_abs();
  for (int g = 1; g < trace.samples(); ++g) {
    const double dt = trace.grid[g] - trace.grid[g - 1];
    for (int i = 0; i < 5; ++i)
      CHECK(std::abs(trace.curves[g](i) - trace.curves[g - 1](i)) <=
            bnorm * dt + 1e-9);
  }
  for (int g = 0; g < trace.samples(); g += 16) {
    auto re = eigh(pencil_at(a, b, trace.grid[g])).spectrum;
    CHECK((re.values() - trace.curves[g]).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // frames carry eigenvectors for their rows
  for (int g = 0; g < trace.samples(); g += 16) {
    Matrix at = a.mat() + trace.grid[g] * b.mat();
    for (int i = 0; i < 5; ++i)
      CHECK((at * trace.frames[g].col(i) -
             trace.curves[g](i) * trace.frames[g].col(i))
                .norm() <= scaled_residual_tol(1e-8, a, b));
  }
}

TEST_CASE("derivative sums respect the top-k ceiling away from crossings") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto a = random_hermitian(5, 9000 + seed);
    auto b = random_hermitian(5, 9100 + seed);
    const double topk = eigh(b).spectrum.top_sum(2);
    IndexSet s(5, {2, 4});
    for (double t : {0.1, 0.35, 0.6, 0.85}) {
      Vector nu = derivative_at(a, b, t, Side::Right);
      CHECK(nu(s.indices()[0] - 1) + nu(s.indices()[1] - 1) <= topk + 1e-8);
    }
  }
}

TEST_CASE("crossing count stays within the algebraic bound") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int n = 3 + static_cast<int>(seed % 3);
    auto a = random_hermitian(n, 400 + seed);
    auto b = random_hermitian(n, 500 + seed);
    auto trace = trace_pencil(a, b, 0.0, 1.0, 65);
    CHECK(static_cast<int>(trace.crossings.size()) <= n * (n - 1));
  }
}

TEST_CASE("trace argument validation") {
  auto a = diag({1, 0});
  CHECK_THROWS_AS(trace_pencil(a, a, 1.0, 0.0, 10), InvalidArgument);
  CHECK_THROWS_AS(trace_pencil(a, a, 0.0, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(trace_pencil(a, diag({1, 2, 3}), 0.0, 1.0, 10),
                  DimensionMismatch);
  CHECK_THROWS_AS(phi_curve(trace_pencil(a, a, 0.0, 1.0, 5), IndexSet(3, {1})),
                  DimensionMismatch);
  CHECK_THROWS_AS(integrate_phi_prime(a, a, IndexSet(2, {1}), 1.0, 0.0),
                  InvalidArgument);
  auto f2 = eigh(a).frame;
  auto f3 = eigh(diag({1, 2, 3})).frame;
  auto c2 = cluster_spectrum(eigh(a).spectrum);
  auto c3 = cluster_spectrum(eigh(diag({1, 2, 3})).spectrum);
  CHECK_THROWS_AS(match_frames(f2, f3, c2, c3), DimensionMismatch);
}
