#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wielandt/inequalities.hpp"
#include "wielandt/pencil.hpp"
#include "wielandt/perturbation.hpp"
#include "wielandt/types.hpp"

namespace wielandt {

/// Thin wrapper over wielandt_check; entry point for certification, expected
/// to report the equality band.
InequalityReport check_equality(const HermitianMatrix& a,
                                const HermitianMatrix& b, const IndexSet& s,
                                const Tolerances& tol = {});

/// Result of the rate-sum condition: 1-based indices p with
/// lambda_{p_j}(A) = lambda_{i_j}(A) through the cluster structure,
/// the achieved maximum of sum nu_{p_j}, and the target top-k sum of
/// lambda(B).
struct Condition3Result {
  std::vector<int> p;
  double achieved = 0.0;
  double target = 0.0;
};

/// The admissible maximum of sum nu_{p_j} is reached by taking, inside each
/// cluster of A, the required count of that cluster's largest rates; this
/// computes that maximum and its achieving p. Always defined.
Condition3Result condition3_max(const HermitianMatrix& a,
                                const HermitianMatrix& b, const IndexSet& s,
                                double tol_cluster = Tolerances{}.cluster);

/// Present iff the admissible maximum hits the top-k sum of lambda(B) within
/// tolerance.
std::optional<Condition3Result> condition3_check(const HermitianMatrix& a,
                                                 const HermitianMatrix& b,
                                                 const IndexSet& s,
                                                 const Tolerances& tol = {});

/// Search for a k-dimensional subspace invariant under both A and B, spanned
/// by eigenvectors of B for its k largest eigenvalues and by eigenvectors of
/// A for the values selected by the index set. Candidates combine the forced
/// part of B's top-k structure with completions drawn from eigenvectors of
/// A's compression onto B's boundary eigenspace; the number of completions is
/// capped.
std::optional<OrthonormalFrame> condition1_search(const HermitianMatrix& a,
                                                  const HermitianMatrix& b,
                                                  const IndexSet& s,
                                                  const Tolerances& tol = {},
                                                  int completion_cap = 64);

/// Present iff some cluster-admissible p makes the selected eigenvalue sum of
/// A + t1 B exactly affine with slope equal to the top-k sum of lambda(B).
/// Returns the lexicographically first such p.
std::optional<std::vector<int>> condition2_check(const HermitianMatrix& a,
                                                 const HermitianMatrix& b,
                                                 const IndexSet& s, double t1,
                                                 const Tolerances& tol = {});

struct Condition2Result {
  std::vector<int> p;
  double t1 = 0.0;
};

/// All three equivalent conditions evaluated together; `consistent` demands
/// all-or-none presence. Condition 2 is checked at a parameter chosen inside
/// the first crossing-free interval of the traced pencil.
struct ConditionReport {
  std::optional<OrthonormalFrame> condition1;
  std::optional<Condition2Result> condition2;
  std::optional<Condition3Result> condition3;
  double t1_used = 0.0;
  bool consistent = false;
};

ConditionReport equivalence_report(const HermitianMatrix& a,
                                   const HermitianMatrix& b, const IndexSet& s,
                                   const Tolerances& tol = {});

/// Measured residuals for one certificate segment.
struct SegmentResiduals {
  double curve_match = 0.0;   ///< max |mu_j(t) - lambda_{i_j}(t)| over samples
  double a_invariance = 0.0;  ///< invariant_residual(A, U_l)
  double b_invariance = 0.0;  ///< invariant_residual(B, U_l)
  double top_k_b_match = 0.0; ///< max deviation of spec(U* B U) from top-k of B
  /// Diagnostic, never a gate: largest principal-angle sine between U_l and
  /// the rate-adapted selection at interior verification samples. Gauges how
  /// much the subspace choice depends on the sample inside the segment.
  double subspace_drift = 0.0;
};

/// Witness for the equality case: subspaces U_1..U_r, each invariant under A
/// and B and spanning B's top-k eigenspace directions, with breakpoints
/// 0 = b_0 < ... < b_r = 1 such that on [b_{l-1}, b_l] the restriction
/// eigenvalues of A + tB to U_l track the selected ordered curves.
struct EqualityCertificate {
  IndexSet indices;
  std::vector<double> breakpoints;
  std::vector<OrthonormalFrame> subspaces;
  std::vector<SegmentResiduals> residuals;

  int r() const { return static_cast<int>(subspaces.size()); }
};

struct CertificateVerification {
  bool ok = false;
  std::string first_violation;
  std::vector<SegmentResiduals> residuals;
};

/// Re-check every certificate invariant from the certificate data alone, at
/// `samples_per_segment` points per segment including endpoints.
CertificateVerification verify_certificate(const HermitianMatrix& a,
                                           const HermitianMatrix& b,
                                           const EqualityCertificate& cert,
                                           const Tolerances& tol = {},
                                           int samples_per_segment = 9);

/// Build and verify a certificate: trace the pencil over [0, 1], cut at the
/// detected crossings, span each segment's subspace from the rate-adapted
/// eigenvectors at the segment midpoint, and merge consecutive segments whose
/// subspaces agree. Throws CertificationFailure if equality is not detected
/// or any invariant fails.
EqualityCertificate certify(const HermitianMatrix& a, const HermitianMatrix& b,
                            const IndexSet& s, const Tolerances& tol = {},
                            int samples_per_segment = 9);

struct MaximalT1 {
  double value = 0.0;
  bool infinite = false;
};

/// Largest t up to t_cap for which the affine equality of condition 2
/// persists, located by scan plus bisection to relative width 1e-8. Returns
/// the infinite flag when the condition still holds at t_cap, and 0 when the
/// rate-sum condition already fails at t = 0+.
MaximalT1 maximal_t1(const HermitianMatrix& a, const HermitianMatrix& b,
                     const IndexSet& s, const Tolerances& tol = {},
                     double t_cap = 16.0);

/// Random equality instance with a planted common invariant subspace: block
/// pencils conjugated by a random unitary, with the companion block's curves
/// kept clear of the planted block's band so the selected positions never
/// change on [0, 1].
struct BlockInstance {
  HermitianMatrix a;
  HermitianMatrix b;
  IndexSet indices;
  Matrix planted_subspace;  ///< n x k orthonormal columns
};

BlockInstance make_equality_block_instance(int n, int k, std::uint64_t seed);

struct RSearchCandidate {
  std::uint64_t instance_seed = 0;
  int r = 0;
  double min_pairwise_sine = 0.0;  ///< smallest pairwise principal-angle sine
};

struct RSearchResult {
  std::vector<RSearchCandidate> candidates;
  std::string rejected_reason;  ///< non-empty when the search did not run
  int trials_run = 0;
  int certify_failures = 0;  ///< planted instances the certifier rejected
};

/// Experimental search for equality instances whose certificate needs two or
/// more genuinely distinct subspaces and admits no single-subspace witness.
/// Output is a candidate list for inspection, never a claimed counterexample.
/// k = 1 is rejected with an explanation (a single subspace always suffices
/// there).
RSearchResult search_r_greater_1(std::uint64_t seed, int n, int k, int trials,
                                 const Tolerances& tol = {});

/// sin of the largest principal angle between the column spans of two n x k
/// orthonormal frames.
double max_principal_sine(const Matrix& u, const Matrix& v);

}  // namespace wielandt
