#pragma once

#include "wielandt/core.hpp"
#include "wielandt/types.hpp"

namespace wielandt {

/// First-order growth rates nu_1 >= ... within each eigenvalue cluster of the
/// base matrix, together with an eigenvector frame adapted to the direction
/// matrix so that nu_j equals the Rayleigh quotient of the j-th frame vector.
struct PerturbationRates {
  Vector nu;                      ///< rates, non-increasing inside clusters
  ClusterStructure clusters;      ///< cluster structure of the base spectrum
  OrthonormalFrame adapted_frame; ///< nu_j == adapted_j^* B adapted_j
  Spectrum base;                  ///< spectrum of the unperturbed matrix
};

/// Rates of the pencil A + tB at t = 0+: per cluster of A, the non-increasing
/// eigenvalues of the compression of B onto that eigenspace. The adapted
/// frame rotates A's eigenvectors within each cluster so the compression is
/// diagonal.
PerturbationRates first_order_rates(const HermitianMatrix& a,
                                    const HermitianMatrix& b,
                                    double tol_cluster = Tolerances{}.cluster);

/// Self-test of the rates against one-sided finite differences: the largest
/// deviation between (lambda_j(A + hB) - lambda_j(A)) / h, sorted descending
/// within each cluster of A, and nu_j.
double rate_consistency_check(const HermitianMatrix& a,
                              const HermitianMatrix& b, double h = 1e-5);

}  // namespace wielandt
