#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "wielandt/types.hpp"

namespace wielandt {

/// Deterministic random source. Gaussian variates come from Box-Muller over
/// mt19937_64 uniforms so that streams are reproducible bit-for-bit from the
/// seed, independent of the platform's std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Standard complex Gaussian: real and imaginary parts each N(0, 1/2).
  Complex cgaussian() {
    const double s = 0.70710678118654752440;
    return {gaussian() * s, gaussian() * s};
  }

  std::uint64_t raw() { return gen_(); }

  /// Uniform integer in [0, hi] inclusive.
  int uniform_int(int hi) {
    int v = static_cast<int>(uniform() * (hi + 1));
    return v > hi ? hi : v;
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Matrix complex_gaussian(int rows, int cols, Rng& rng);

/// Haar-like random unitary: QR of a complex Gaussian with the phases of the
/// R diagonal absorbed into Q, which makes the draw unique and deterministic.
Matrix random_unitary(int n, Rng& rng);

namespace detail {
/// Rotate a column so its largest-magnitude entry (first index on ties) is
/// real and non-negative.
void fix_phase(Matrix& m, int col);
}  // namespace detail

/// Checks max-abs deviation from the adjoint against tol and returns the
/// symmetrized matrix (M + M*)/2.
HermitianMatrix validate_hermitian(const Matrix& raw,
                                   double tol = Tolerances{}.hermiticity);

/// Dense Hermitian eigendecomposition with deterministic post-processing:
/// eigenvalues sorted non-increasing; each eigenvector's largest-magnitude
/// entry made real non-negative; numerically degenerate groups are
/// re-orthonormalized and their vectors ordered by the index of the largest
/// component. Identical inputs give identical outputs.
EigenDecomposition eigh(const HermitianMatrix& a);

/// Merge adjacent eigenvalues whose gap is at most
/// tol_cluster * (1 + max|value|); clustering is the transitive closure of
/// adjacency merging.
ClusterStructure cluster_spectrum(const Spectrum& s,
                                  double tol_cluster = Tolerances{}.cluster);

/// Sum of the k largest eigenvalues of A (equals tr A at k = n).
double ky_fan_sum(const HermitianMatrix& a, int k);

/// The k x k matrix [F_i* M F_j]; realizes the operator restriction when
/// span(F) is M-invariant. Hermitian by construction.
HermitianMatrix frame_compression(const HermitianMatrix& m,
                                  const OrthonormalFrame& f);

/// ||(I - P_F) M P_F||_F where P_F projects onto span(F); zero exactly when
/// span(F) is M-invariant.
double invariant_residual(const HermitianMatrix& m, const OrthonormalFrame& f);

/// Decomposition of the candidate set of subspaces spanned by eigenvectors
/// for the k largest eigenvalues of B. `forced` spans the clusters strictly
/// above the cluster holding position k (all of the first k eigenvectors when
/// the cluster boundary falls exactly at k); `boundary` spans the eigenspace
/// of the cluster holding position k; `deficiency` is how many directions a
/// candidate must draw from `boundary`.
struct TopKSplit {
  Matrix forced;      ///< n x f, orthonormal columns (f may be 0)
  Matrix boundary;    ///< n x m, orthonormal columns
  int deficiency = 0; ///< k - f; zero when the boundary falls at k
};

TopKSplit top_k_spectral_structure(const HermitianMatrix& b, int k,
                                   double tol_cluster = Tolerances{}.cluster);

/// Reproducible pseudo-random Hermitian matrix. With `spec` given, returns
/// Q diag(spec) Q* for a seeded random unitary Q, so the spectrum is exactly
/// the sorted spec up to solver tolerance.
HermitianMatrix random_hermitian(
    int n, std::uint64_t seed,
    const std::optional<std::vector<double>>& spec = std::nullopt);

}  // namespace wielandt
