#include "wielandt/perturbation.hpp"

#include <algorithm>
#include <cmath>

namespace wielandt {

PerturbationRates first_order_rates(const HermitianMatrix& a,
                                    const HermitianMatrix& b,
                                    double tol_cluster) {
  if (a.n() != b.n())
    throw DimensionMismatch("first_order_rates: dimensions " +
                            std::to_string(a.n()) + " and " +
                            std::to_string(b.n()));
  const int n = a.n();
  EigenDecomposition ed = eigh(a);
  ClusterStructure clusters = cluster_spectrum(ed.spectrum, tol_cluster);

  Vector nu(n);
  Matrix adapted = ed.frame.vectors();
  for (int c = 0; c < clusters.count(); ++c) {
    const int lo = clusters.begin(c);
    const int m = clusters.multiplicity(c);
    if (m == 1) {
      nu(lo) = std::real(Complex(adapted.col(lo).dot(b.mat() * adapted.col(lo))));
      continue;
    }
    Matrix uc = adapted.middleCols(lo, m);
    EigenDecomposition sub = eigh(HermitianMatrix(uc.adjoint() * b.mat() * uc));
    nu.segment(lo, m) = sub.spectrum.values();
    adapted.middleCols(lo, m) = uc * sub.frame.vectors();
    for (int j = lo; j < lo + m; ++j) detail::fix_phase(adapted, j);
  }

  return {std::move(nu), std::move(clusters),
          OrthonormalFrame::trusted(std::move(adapted)), ed.spectrum};
}

double rate_consistency_check(const HermitianMatrix& a,
                              const HermitianMatrix& b, double h) {
  if (!(h > 0.0)) throw InvalidArgument("rate_consistency_check: h must be > 0");
  PerturbationRates rates = first_order_rates(a, b);
  Spectrum perturbed = eigh(pencil_at(a, b, h)).spectrum;

  const int n = a.n();
  Vector quot(n);
  for (int j = 0; j < n; ++j) quot(j) = (perturbed[j] - rates.base[j]) / h;

  double worst = 0.0;
  for (int c = 0; c < rates.clusters.count(); ++c) {
    const int lo = rates.clusters.begin(c);
    const int m = rates.clusters.multiplicity(c);
    std::vector<double> q(quot.data() + lo, quot.data() + lo + m);
    std::sort(q.begin(), q.end(), std::greater<double>());
    for (int j = 0; j < m; ++j)
      worst = std::max(worst, std::abs(q[j] - rates.nu(lo + j)));
  }
  return worst;
}

}  // namespace wielandt
