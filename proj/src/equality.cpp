#include "wielandt/equality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace wielandt {

namespace {

// How many positions the index set requires from each cluster of A; the
// admissibility constraint lambda_{p_j}(A) = lambda_{i_j}(A) is evaluated
// through cluster membership, never through floating-point equality.
std::vector<int> required_counts(const ClusterStructure& clusters,
                                 const IndexSet& s) {
  std::vector<int> req(clusters.count(), 0);
  for (int i : s.indices()) ++req[clusters.cluster_of(i - 1)];
  return req;
}

bool next_combination(std::vector<int>& c, int m) {
  const int d = static_cast<int>(c.size());
  for (int i = d - 1; i >= 0; --i) {
    if (c[i] < m - d + i) {
      ++c[i];
      for (int j = i + 1; j < d; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double binomial_capped(int m, int d, double cap) {
  double v = 1.0;
  for (int i = 0; i < d; ++i) {
    v *= static_cast<double>(m - i) / (i + 1);
    if (v > cap) return cap + 1.0;
  }
  return v;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

InequalityReport check_equality(const HermitianMatrix& a,
                                const HermitianMatrix& b, const IndexSet& s,
                                const Tolerances& tol) {
  return wielandt_check(a, b, s, tol);
}

Condition3Result condition3_max(const HermitianMatrix& a,
                                const HermitianMatrix& b, const IndexSet& s,
                                double tol_cluster) {
  if (a.n() != b.n() || s.n() != a.n())
    throw DimensionMismatch("condition3_max: dimension mismatch");
  PerturbationRates rates = first_order_rates(a, b, tol_cluster);
  Condition3Result res;
  res.target = eigh(b).spectrum.top_sum(s.k());
  std::vector<int> req = required_counts(rates.clusters, s);
  // rates are non-increasing inside each cluster, so the admissible maximum
  // takes each cluster's leading positions
  for (int c = 0; c < rates.clusters.count(); ++c) {
    for (int j = 0; j < req[c]; ++j) {
      const int pos = rates.clusters.begin(c) + j;
      res.p.push_back(pos + 1);
      res.achieved += rates.nu(pos);
    }
  }
  return res;
}

std::optional<Condition3Result> condition3_check(const HermitianMatrix& a,
                                                 const HermitianMatrix& b,
                                                 const IndexSet& s,
                                                 const Tolerances& tol) {
  Condition3Result m = condition3_max(a, b, s, tol.cluster);
  if (std::abs(m.achieved - m.target) <= scaled_residual_tol(tol.residual, a, b))
    return m;
  return std::nullopt;
}

std::optional<OrthonormalFrame> condition1_search(const HermitianMatrix& a,
                                                  const HermitianMatrix& b,
                                                  const IndexSet& s,
                                                  const Tolerances& tol,
                                                  int completion_cap) {
  if (a.n() != b.n() || s.n() != a.n())
    throw DimensionMismatch("condition1_search: dimension mismatch");
  const int n = a.n();
  const int k = s.k();
  TopKSplit split = top_k_spectral_structure(b, k, tol.cluster);
  EigenDecomposition ed_a = eigh(a);
  EigenDecomposition ed_b = eigh(b);

  Vector target_a(k);
  for (int j = 0; j < k; ++j) target_a(j) = ed_a.spectrum[s.indices()[j] - 1];
  const double band = scaled_residual_tol(tol.residual, a, b);

  auto accept = [&](const Matrix& u) -> bool {
    OrthonormalFrame f = OrthonormalFrame::trusted(u);
    if (invariant_residual(a, f) > band) return false;
    if (invariant_residual(b, f) > band) return false;
    Spectrum cb = eigh(frame_compression(b, f)).spectrum;
    for (int j = 0; j < k; ++j)
      if (std::abs(cb[j] - ed_b.spectrum[j]) > band) return false;
    Spectrum ca = eigh(frame_compression(a, f)).spectrum;
    for (int j = 0; j < k; ++j)
      if (std::abs(ca[j] - target_a(j)) > band) return false;
    return true;
  };

  if (split.deficiency == 0) {
    if (accept(split.forced))
      return OrthonormalFrame::trusted(split.forced);
    return std::nullopt;
  }

  const int m = static_cast<int>(split.boundary.cols());
  const int d = split.deficiency;
  if (binomial_capped(m, d, completion_cap) > completion_cap)
    throw CombinatorialCap(
        "boundary eigenspace of dimension " + std::to_string(m) + " needs " +
        std::to_string(d) + " completions; candidate count exceeds cap " +
        std::to_string(completion_cap));

  // A-invariance inside the boundary eigenspace is decided by diagonalizing
  // A's compression there; completions are spans of compression eigenvectors.
  EigenDecomposition sub =
      eigh(HermitianMatrix(split.boundary.adjoint() * a.mat() * split.boundary));
  const int f = k - d;
  std::vector<int> combo(d);
  std::iota(combo.begin(), combo.end(), 0);
  do {
    Matrix u(n, k);
    if (f > 0) u.leftCols(f) = split.forced;
    for (int j = 0; j < d; ++j)
      u.col(f + j) = split.boundary * sub.frame.vectors().col(combo[j]);
    if (accept(u)) return OrthonormalFrame::trusted(u);
  } while (next_combination(combo, m));
  return std::nullopt;
}

std::optional<std::vector<int>> condition2_check(const HermitianMatrix& a,
                                                 const HermitianMatrix& b,
                                                 const IndexSet& s, double t1,
                                                 const Tolerances& tol) {
  if (!(t1 > 0.0)) throw InvalidArgument("condition2_check: t1 must be > 0");
  if (a.n() != b.n() || s.n() != a.n())
    throw DimensionMismatch("condition2_check: dimension mismatch");
  Spectrum sp_a = eigh(a).spectrum;
  Spectrum sp_b = eigh(b).spectrum;
  Spectrum sp_t = eigh(pencil_at(a, b, t1)).spectrum;
  ClusterStructure clusters = cluster_spectrum(sp_a, tol.cluster);
  const double target = sp_b.top_sum(s.k());
  const double band =
      tol.residual * (1.0 + a.frobenius() + (1.0 + std::abs(t1)) * b.frobenius());
  std::vector<int> req = required_counts(clusters, s);

  double total = 1.0;
  for (int c = 0; c < clusters.count(); ++c)
    total *= binomial_capped(clusters.multiplicity(c), req[c], 2e5);
  if (total > 2e5)
    throw CombinatorialCap("admissible index enumeration exceeds cap");

  std::vector<int> p;
  std::function<std::optional<std::vector<int>>(int)> rec =
      [&](int c) -> std::optional<std::vector<int>> {
    if (c == clusters.count()) {
      double lhs = 0.0, rhs = t1 * target;
      for (int i : p) {
        lhs += sp_t[i - 1];
        rhs += sp_a[i - 1];
      }
      if (std::abs(lhs - rhs) <= band) return p;
      return std::nullopt;
    }
    if (req[c] == 0) return rec(c + 1);
    std::vector<int> combo(req[c]);
    std::iota(combo.begin(), combo.end(), 0);
    do {
      for (int j : combo) p.push_back(clusters.begin(c) + j + 1);
      auto found = rec(c + 1);
      p.resize(p.size() - combo.size());
      if (found) return found;
    } while (next_combination(combo, clusters.multiplicity(c)));
    return std::nullopt;
  };
  return rec(0);
}

ConditionReport equivalence_report(const HermitianMatrix& a,
                                   const HermitianMatrix& b, const IndexSet& s,
                                   const Tolerances& tol) {
  ConditionReport rep;
  rep.condition3 = condition3_check(a, b, s, tol);
  rep.condition1 = condition1_search(a, b, s, tol);

  // condition 2 needs a parameter inside the first crossing-free interval
  PencilTrace trace = trace_pencil(a, b, 0.0, 1.0, 65, true, tol);
  double t1 = 0.5;
  for (const Crossing& c : trace.crossings) {
    if (c.t > 1e-6 && c.t < 1.0 - 1e-12) {
      t1 = 0.5 * c.t;
      break;
    }
  }
  rep.t1_used = t1;
  if (auto p = condition2_check(a, b, s, t1, tol))
    rep.condition2 = Condition2Result{*p, t1};

  const bool c1 = rep.condition1.has_value();
  const bool c2 = rep.condition2.has_value();
  const bool c3 = rep.condition3.has_value();
  rep.consistent = (c1 && c2 && c3) || (!c1 && !c2 && !c3);
  return rep;
}

double max_principal_sine(const Matrix& u, const Matrix& v) {
  Eigen::JacobiSVD<Matrix> svd(u.adjoint() * v);
  double smin = svd.singularValues().size()
                    ? svd.singularValues().minCoeff()
                    : 0.0;
  smin = std::clamp(smin, 0.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - smin * smin));
}

namespace {

// Segment subspace: per cluster of A(tau), the leading rate-adapted
// eigenvectors, as many as the index set selects there. For simple spectra
// this is exactly the eigenvectors at the selected positions; inside
// degenerate clusters the rate-adapted choice is the one that can match B's
// top-k eigenspace.
Matrix segment_subspace(const HermitianMatrix& a, const HermitianMatrix& b,
                        const IndexSet& s, double tau, double tol_cluster) {
  PerturbationRates rates = first_order_rates(pencil_at(a, b, tau), b,
                                              tol_cluster);
  std::vector<int> req = required_counts(rates.clusters, s);
  Matrix u(a.n(), s.k());
  int out = 0;
  for (int c = 0; c < rates.clusters.count(); ++c)
    for (int j = 0; j < req[c]; ++j)
      u.col(out++) = rates.adapted_frame.vectors().col(rates.clusters.begin(c) + j);
  return u;
}

}  // namespace

CertificateVerification verify_certificate(const HermitianMatrix& a,
                                           const HermitianMatrix& b,
                                           const EqualityCertificate& cert,
                                           const Tolerances& tol,
                                           int samples_per_segment) {
  CertificateVerification ver;
  if (samples_per_segment < 2)
    throw InvalidArgument("verify_certificate: need at least 2 samples per segment");
  const int r = cert.r();
  const auto& bs = cert.breakpoints;
  auto fail = [&](const std::string& msg) {
    if (ver.first_violation.empty()) ver.first_violation = msg;
    ver.ok = false;
  };
  ver.ok = true;

  if (static_cast<int>(bs.size()) != r + 1 || r < 1) {
    fail("breakpoint count does not match subspace count");
    return ver;
  }
  if (std::abs(bs.front()) > 1e-12 || std::abs(bs.back() - 1.0) > 1e-12)
    fail("breakpoints must start at 0 and end at 1");
  for (size_t i = 0; i + 1 < bs.size(); ++i)
    if (!(bs[i] < bs[i + 1])) fail("breakpoints must be strictly increasing");
  if (!ver.ok) return ver;

  const int k = cert.indices.k();
  const double band = scaled_residual_tol(tol.residual, a, b);
  Spectrum sp_b = eigh(b).spectrum;

  for (int l = 0; l < r; ++l) {
    const OrthonormalFrame& u = cert.subspaces[l];
    SegmentResiduals res;
    if (u.ambient() != a.n() || u.size() != k) {
      fail("segment " + std::to_string(l + 1) + ": subspace has wrong shape");
      ver.residuals.push_back(res);
      continue;
    }
    res.a_invariance = invariant_residual(a, u);
    res.b_invariance = invariant_residual(b, u);
    Spectrum cb = eigh(frame_compression(b, u)).spectrum;
    for (int j = 0; j < k; ++j)
      res.top_k_b_match =
          std::max(res.top_k_b_match, std::abs(cb[j] - sp_b[j]));

    for (int q = 0; q < samples_per_segment; ++q) {
      const double t =
          bs[l] + (bs[l + 1] - bs[l]) * q / (samples_per_segment - 1);
      HermitianMatrix at = pencil_at(a, b, t);
      Spectrum lam = eigh(at).spectrum;
      Spectrum mu = eigh(frame_compression(at, u)).spectrum;
      for (int j = 0; j < k; ++j) {
        double dev = std::abs(mu[j] - lam[cert.indices.indices()[j] - 1]);
        if (dev > res.curve_match) res.curve_match = dev;
        if (dev > band)
          fail("segment " + std::to_string(l + 1) + ", t = " + std::to_string(t) +
               ": restriction eigenvalue " + std::to_string(j + 1) +
               " deviates from curve by " + std::to_string(dev));
      }
      if (q > 0 && q + 1 < samples_per_segment) {
        Matrix local = segment_subspace(a, b, cert.indices, t, tol.cluster);
        res.subspace_drift = std::max(
            res.subspace_drift, max_principal_sine(u.vectors(), local));
      }
    }
    if (res.a_invariance > band)
      fail("segment " + std::to_string(l + 1) + ": subspace is not A-invariant (residual " +
           std::to_string(res.a_invariance) + ")");
    if (res.b_invariance > band)
      fail("segment " + std::to_string(l + 1) + ": subspace is not B-invariant (residual " +
           std::to_string(res.b_invariance) + ")");
    if (res.top_k_b_match > band)
      fail("segment " + std::to_string(l + 1) +
           ": B-compression spectrum misses the top-k eigenvalues by " +
           std::to_string(res.top_k_b_match));
    ver.residuals.push_back(res);
  }
  return ver;
}

EqualityCertificate certify(const HermitianMatrix& a, const HermitianMatrix& b,
                            const IndexSet& s, const Tolerances& tol,
                            int samples_per_segment) {
  InequalityReport rep = check_equality(a, b, s, tol);
  if (rep.verdict != Verdict::Equality)
    throw CertificationFailure(
        "equality not detected for indices {" + join_ints(s.indices()) +
        "}: slack = " + std::to_string(rep.slack) + " exceeds band " +
        std::to_string(scaled_residual_tol(tol.residual, a, b)));

  PencilTrace trace = trace_pencil(a, b, 0.0, 1.0, 129, true, tol);
  std::vector<double> bs{0.0};
  for (const Crossing& c : trace.crossings)
    if (c.t > 2e-8 && c.t < 1.0 - 2e-8) bs.push_back(c.t);
  bs.push_back(1.0);
  std::sort(bs.begin(), bs.end());

  std::vector<Matrix> segment_u;
  for (size_t l = 0; l + 1 < bs.size(); ++l) {
    const double tau = 0.5 * (bs[l] + bs[l + 1]);
    segment_u.push_back(segment_subspace(a, b, s, tau, tol.cluster));
  }

  // merge consecutive segments whose subspaces agree; a merged certificate
  // is strictly stronger (smaller r)
  std::vector<double> merged_b{0.0};
  std::vector<Matrix> merged_u;
  for (size_t l = 0; l < segment_u.size(); ++l) {
    if (!merged_u.empty() &&
        max_principal_sine(merged_u.back(), segment_u[l]) <= tol.residual)
      continue;
    if (l > 0) merged_b.push_back(bs[l]);
    merged_u.push_back(segment_u[l]);
  }
  merged_b.push_back(1.0);

  EqualityCertificate cert{s, std::move(merged_b), {}, {}};
  for (Matrix& u : merged_u)
    cert.subspaces.push_back(OrthonormalFrame::trusted(std::move(u)));

  CertificateVerification ver =
      verify_certificate(a, b, cert, tol, samples_per_segment);
  cert.residuals = ver.residuals;
  if (!ver.ok) throw CertificationFailure(ver.first_violation);
  return cert;
}

MaximalT1 maximal_t1(const HermitianMatrix& a, const HermitianMatrix& b,
                     const IndexSet& s, const Tolerances& tol, double t_cap) {
  if (!(t_cap > 0.0)) throw InvalidArgument("maximal_t1: t_cap must be > 0");
  if (!condition3_check(a, b, s, tol)) return {0.0, false};
  auto present = [&](double t) {
    return condition2_check(a, b, s, t, tol).has_value();
  };
  if (present(t_cap)) return {t_cap, true};

  double lo = 0.0, hi = t_cap;
  const int steps = 64;
  for (int i = 1; i <= steps; ++i) {
    const double t = t_cap * i / steps;
    if (present(t)) {
      lo = t;
    } else {
      hi = t;
      break;
    }
  }
  while (hi - lo > 1e-8 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (present(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, false};
}

BlockInstance make_equality_block_instance(int n, int k, std::uint64_t seed) {
  if (k < 1 || k > n - 1)
    throw InvalidArgument("make_equality_block_instance: need 1 <= k <= n-1");
  Rng rng(seed);
  const int m = n - k;

  Vector alpha(k), beta(k);
  for (int j = 0; j < k; ++j) alpha(j) = -1.0 + 2.0 * rng.uniform();
  for (int j = 0; j < k; ++j) beta(j) = 0.5 + 1.5 * rng.uniform();

  Matrix w = random_unitary(k, rng);
  Matrix v = random_unitary(k, rng);
  Matrix a1 = w * alpha.cast<Complex>().asDiagonal() * w.adjoint();
  Matrix b1 = v * beta.cast<Complex>().asDiagonal() * v.adjoint();

  // companion block drifts uniformly with slope c, kept strictly below the
  // planted block's B-eigenvalues so the top-k of B is exactly beta
  const double c_hi = beta.minCoeff() - 0.25;
  const double c = -1.0 + rng.uniform() * (c_hi + 1.0);

  // planted curves stay inside [min alpha, max alpha + max beta] on [0, 1];
  // companion levels are placed clear of that band for all t in [0, 1]
  const double band_lo = alpha.minCoeff();
  const double band_hi = alpha.maxCoeff() + beta.maxCoeff();
  const int above = rng.uniform_int(m);
  Vector levels(m);
  for (int j = 0; j < m; ++j) {
    if (j < above)
      levels(j) = band_hi + 0.5 + 1.5 * rng.uniform() + std::max(0.0, -c);
    else
      levels(j) = band_lo - 0.5 - 1.5 * rng.uniform() - std::max(0.0, c);
  }
  Matrix v2 = random_unitary(m, rng);
  Matrix a2 = v2 * levels.cast<Complex>().asDiagonal() * v2.adjoint();

  Matrix afull = Matrix::Zero(n, n), bfull = Matrix::Zero(n, n);
  afull.topLeftCorner(k, k) = a1;
  afull.bottomRightCorner(m, m) = a2;
  bfull.topLeftCorner(k, k) = b1;
  bfull.bottomRightCorner(m, m) = c * Matrix::Identity(m, m);

  Matrix q = random_unitary(n, rng);
  std::vector<int> indices(k);
  for (int j = 0; j < k; ++j) indices[j] = above + 1 + j;

  return {HermitianMatrix(q * afull * q.adjoint()),
          HermitianMatrix(q * bfull * q.adjoint()), IndexSet(n, indices),
          q.leftCols(k)};
}

RSearchResult search_r_greater_1(std::uint64_t seed, int n, int k, int trials,
                                 const Tolerances& tol) {
  RSearchResult result;
  if (k < 2) {
    result.rejected_reason =
        "k = 1 always admits a single-subspace certificate (each restriction "
        "carries one affine eigenvalue curve, so distinct subspaces carry "
        "curves that either coincide or never meet); search requires k >= 2";
    return result;
  }
  if (n < k + 1)
    throw InvalidArgument("search_r_greater_1: need n >= k + 1");

  Rng master(seed);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t child = master.raw();
    BlockInstance inst = make_equality_block_instance(n, k, child);
    ++result.trials_run;
    EqualityCertificate cert{inst.indices, {}, {}, {}};
    try {
      cert = certify(inst.a, inst.b, inst.indices, tol);
    } catch (const CertificationFailure&) {
      ++result.certify_failures;
      continue;
    }
    if (cert.r() < 2) continue;
    double min_sine = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cert.r(); ++i)
      for (int j = i + 1; j < cert.r(); ++j)
        min_sine = std::min(min_sine,
                            max_principal_sine(cert.subspaces[i].vectors(),
                                               cert.subspaces[j].vectors()));
    if (min_sine <= tol.residual) continue;  // subspaces effectively repeat
    if (condition1_search(inst.a, inst.b, inst.indices, tol)) continue;
    result.candidates.push_back({child, cert.r(), min_sine});
  }
  return result;
}

}  // namespace wielandt
