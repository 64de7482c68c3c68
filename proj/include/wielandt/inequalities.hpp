#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wielandt/types.hpp"

namespace wielandt {

/// Strictly increasing 1-based indices 1 <= i_1 < ... < i_k <= n with
/// 1 <= k <= n-1.
class IndexSet {
 public:
  IndexSet(int n, std::vector<int> indices) : n_(n), indices_(std::move(indices)) {
    const int k = static_cast<int>(indices_.size());
    if (k < 1 || k > n_ - 1)
      throw IndexOutOfRange("index set size k = " + std::to_string(k) +
                            " outside [1, n-1] with n = " + std::to_string(n_));
    int prev = 0;
    for (int i : indices_) {
      if (i <= prev || i > n_)
        throw IndexOutOfRange("index set must be strictly increasing in [1, " +
                              std::to_string(n_) + "]");
      prev = i;
    }
  }

  int n() const { return n_; }
  int k() const { return static_cast<int>(indices_.size()); }
  const std::vector<int>& indices() const { return indices_; }  // 1-based

 private:
  int n_;
  std::vector<int> indices_;
};

enum class Verdict { Holds, Equality, Violated };

std::string to_string(Verdict v);

/// Both sides of the eigenvalue-sum inequality for one index set, with the
/// verdict banded by tolerance: equality iff |slack| <= tol, violated iff
/// slack < -tol.
struct InequalityReport {
  IndexSet indices;
  double lhs = 0.0;    ///< sum over the set of lambda(A+B)
  double rhs = 0.0;    ///< same sum of lambda(A) plus the top-k sum of lambda(B)
  double slack = 0.0;  ///< rhs - lhs
  Verdict verdict = Verdict::Holds;
};

InequalityReport wielandt_check(const HermitianMatrix& a,
                                const HermitianMatrix& b, const IndexSet& s,
                                const Tolerances& tol = {});

/// One report per index set with k in the requested range (default all of
/// [1, n-1]), sorted by slack ascending. Guarded by a dimension cap because
/// the count of subsets is exponential.
std::vector<InequalityReport> wielandt_scan(
    const HermitianMatrix& a, const HermitianMatrix& b,
    std::optional<std::pair<int, int>> k_range = std::nullopt,
    const Tolerances& tol = {}, int scan_cap = 14);

struct MajorizationReport {
  bool holds = false;
  std::vector<double> prefix_margins;  ///< top-k sum of y minus top-k sum of x
  double total_gap = 0.0;              ///< |sum x - sum y|
};

/// x majorized by y: after sorting both descending, every prefix sum of x is
/// bounded by the matching prefix sum of y, and the totals agree.
MajorizationReport majorizes(std::vector<double> x, std::vector<double> y,
                             double tol = Tolerances{}.residual);

/// lambda(A+B) - lambda(A) is majorized by lambda(B).
MajorizationReport lidskii_check(const HermitianMatrix& a,
                                 const HermitianMatrix& b,
                                 const Tolerances& tol = {});

}  // namespace wielandt
