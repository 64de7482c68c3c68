#include "wielandt/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "wielandt/core.hpp"

namespace wielandt {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Equality: return "equality";
    case Verdict::Violated: return "violated";
  }
  return "unknown";
}

namespace {

InequalityReport report_from_spectra(const Spectrum& sp_a, const Spectrum& sp_b,
                                     const Spectrum& sp_ab, const IndexSet& s,
                                     double banded_tol) {
  double lhs = 0.0, rhs = 0.0;
  for (int i : s.indices()) {
    lhs += sp_ab[i - 1];
    rhs += sp_a[i - 1];
  }
  rhs += sp_b.top_sum(s.k());
  const double slack = rhs - lhs;
  Verdict verdict = Verdict::Holds;
  if (std::abs(slack) <= banded_tol)
    verdict = Verdict::Equality;
  else if (slack < -banded_tol)
    verdict = Verdict::Violated;
  return {s, lhs, rhs, slack, verdict};
}

}  // namespace

InequalityReport wielandt_check(const HermitianMatrix& a,
                                const HermitianMatrix& b, const IndexSet& s,
                                const Tolerances& tol) {
  if (a.n() != b.n() || s.n() != a.n())
    throw DimensionMismatch("wielandt_check: dimension mismatch");
  const Spectrum sp_a = eigh(a).spectrum;
  const Spectrum sp_b = eigh(b).spectrum;
  const Spectrum sp_ab = eigh(a + b).spectrum;
  return report_from_spectra(sp_a, sp_b, sp_ab, s,
                             scaled_residual_tol(tol.residual, a, b));
}

std::vector<InequalityReport> wielandt_scan(
    const HermitianMatrix& a, const HermitianMatrix& b,
    std::optional<std::pair<int, int>> k_range, const Tolerances& tol,
    int scan_cap) {
  if (a.n() != b.n()) throw DimensionMismatch("wielandt_scan: dimension mismatch");
  const int n = a.n();
  if (n > scan_cap)
    throw ScanTooLarge("scan over all index sets needs n <= " +
                       std::to_string(scan_cap) + ", got n = " +
                       std::to_string(n));
  int k_lo = 1, k_hi = n - 1;
  if (k_range) {
    k_lo = std::max(1, k_range->first);
    k_hi = std::min(n - 1, k_range->second);
  }

  const Spectrum sp_a = eigh(a).spectrum;
  const Spectrum sp_b = eigh(b).spectrum;
  const Spectrum sp_ab = eigh(a + b).spectrum;
  const double banded = scaled_residual_tol(tol.residual, a, b);

  std::vector<InequalityReport> reports;
  for (int k = k_lo; k <= k_hi; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i + 1;
    while (true) {
      reports.push_back(
          report_from_spectra(sp_a, sp_b, sp_ab, IndexSet(n, idx), banded));
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + 1 + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const InequalityReport& x, const InequalityReport& y) {
                     return x.slack < y.slack;
                   });
  return reports;
}

MajorizationReport majorizes(std::vector<double> x, std::vector<double> y,
                             double tol) {
  if (x.size() != y.size())
    throw LengthMismatch("majorizes: lengths " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()));
  std::sort(x.begin(), x.end(), std::greater<double>());
  std::sort(y.begin(), y.end(), std::greater<double>());
  double scale = 1.0;
  for (double v : x) scale = std::max(scale, 1.0 + std::abs(v));
  for (double v : y) scale = std::max(scale, 1.0 + std::abs(v));
  const double banded = tol * scale;

  MajorizationReport rep;
  rep.holds = true;
  double px = 0.0, py = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    px += x[i];
    py += y[i];
    rep.prefix_margins.push_back(py - px);
    if (py - px < -banded) rep.holds = false;
  }
  rep.total_gap = std::abs(px - py);
  if (rep.total_gap > banded) rep.holds = false;
  return rep;
}

MajorizationReport lidskii_check(const HermitianMatrix& a,
                                 const HermitianMatrix& b,
                                 const Tolerances& tol) {
  if (a.n() != b.n()) throw DimensionMismatch("lidskii_check: dimension mismatch");
  const Spectrum sp_a = eigh(a).spectrum;
  const Spectrum sp_b = eigh(b).spectrum;
  const Spectrum sp_ab = eigh(a + b).spectrum;
  std::vector<double> d(a.n()), lb(a.n());
  for (int i = 0; i < a.n(); ++i) {
    d[i] = sp_ab[i] - sp_a[i];
    lb[i] = sp_b[i];
  }
  return majorizes(std::move(d), std::move(lb), tol.residual);
}

}  // namespace wielandt
