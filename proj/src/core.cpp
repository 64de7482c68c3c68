#include "wielandt/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wielandt {

Matrix complex_gaussian(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.cgaussian();
  return g;
}

Matrix random_unitary(int n, Rng& rng) {
  Matrix g = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  // absorb the R diagonal phases so the factorization, and thus the draw,
  // is unique
  for (int i = 0; i < n; ++i) {
    Complex d = qr.matrixQR()(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

namespace detail {

void fix_phase(Matrix& m, int col) {
  int arg = 0;
  double best = -1.0;
  for (int i = 0; i < m.rows(); ++i) {
    double a = std::abs(m(i, col));
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  Complex z = m(arg, col);
  double a = std::abs(z);
  if (a > 0.0) m.col(col) *= std::conj(z) / a;
}

}  // namespace detail

HermitianMatrix validate_hermitian(const Matrix& raw, double tol) {
  if (raw.rows() != raw.cols())
    throw NotSquare("matrix is not square: " + std::to_string(raw.rows()) +
                    "x" + std::to_string(raw.cols()));
  if (raw.rows() < 1) throw InvalidArgument("matrix dimension must be >= 1");
  int bi = 0, bj = 0;
  double worst = 0.0;
  for (int i = 0; i < raw.rows(); ++i) {
    for (int j = i; j < raw.cols(); ++j) {
      double dev = std::abs(raw(i, j) - std::conj(raw(j, i)));
      if (dev > worst) {
        worst = dev;
        bi = i;
        bj = j;
      }
    }
  }
  if (worst > tol) throw NotHermitian(bi, bj, worst, tol);
  return HermitianMatrix(raw);
}

namespace {

// Solver-level degeneracy threshold, relative to the eigenvalue scale. Much
// tighter than the user-facing cluster tolerance: it only has to absorb
// eigensolver roundoff on exactly repeated eigenvalues.
constexpr double kDegenerateRel = 1e-12;

int leading_index(const Matrix& m, int col) {
  int arg = 0;
  double best = -1.0;
  for (int i = 0; i < m.rows(); ++i) {
    double a = std::abs(m(i, col));
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  return arg;
}

}  // namespace

EigenDecomposition eigh(const HermitianMatrix& a) {
  const int n = a.n();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("Hermitian eigensolver did not converge (n = " +
                             std::to_string(n) + ")");
  Vector vals(n);
  Matrix vecs(n, n);
  for (int i = 0; i < n; ++i) {  // ascending -> non-increasing
    vals(i) = solver.eigenvalues()(n - 1 - i);
    vecs.col(i) = solver.eigenvectors().col(n - 1 - i);
  }

  const double dtol = kDegenerateRel * (1.0 + vals.cwiseAbs().maxCoeff());
  int g = 0;
  while (g < n) {
    int h = g + 1;
    while (h < n && vals(h - 1) - vals(h) <= dtol) ++h;
    const int m = h - g;
    if (m > 1) {
      // re-orthonormalize the degenerate block
      Eigen::HouseholderQR<Matrix> qr(vecs.middleCols(g, m));
      vecs.middleCols(g, m) = qr.householderQ() * Matrix::Identity(n, m);
    }
    for (int c = g; c < h; ++c) detail::fix_phase(vecs, c);
    if (m > 1) {
      // canonical order inside the block: by index of the leading component
      std::vector<int> order(m);
      std::iota(order.begin(), order.end(), 0);
      std::vector<int> keys(m);
      for (int j = 0; j < m; ++j) keys[j] = leading_index(vecs, g + j);
      std::stable_sort(order.begin(), order.end(),
                       [&](int x, int y) { return keys[x] < keys[y]; });
      Matrix block = vecs.middleCols(g, m);
      for (int j = 0; j < m; ++j) vecs.col(g + j) = block.col(order[j]);
    }
    g = h;
  }

  const double rtol = scaled_residual_tol(Tolerances{}.residual, a);
  Matrix resid = a.mat() * vecs - vecs * vals.asDiagonal();
  for (int i = 0; i < n; ++i) {
    if (resid.col(i).norm() > rtol)
      throw ConvergenceFailure("eigenpair residual " +
                               std::to_string(resid.col(i).norm()) +
                               " exceeds tolerance at index " +
                               std::to_string(i));
  }

  return {Spectrum::from_sorted(std::move(vals)),
          OrthonormalFrame::trusted(std::move(vecs))};
}

ClusterStructure cluster_spectrum(const Spectrum& s, double tol_cluster) {
  const int n = s.n();
  const double tol = tol_cluster * (1.0 + s.max_abs());
  ClusterStructure cs;
  cs.boundaries.push_back(0);
  for (int i = 1; i < n; ++i)
    if (s[i - 1] - s[i] > tol) cs.boundaries.push_back(i);
  cs.boundaries.push_back(n);
  for (int c = 0; c < cs.count(); ++c) {
    double sum = 0.0;
    for (int i = cs.begin(c); i < cs.end(c); ++i) sum += s[i];
    cs.representatives.push_back(sum / cs.multiplicity(c));
  }
  return cs;
}

double ky_fan_sum(const HermitianMatrix& a, int k) {
  if (k < 1 || k > a.n())
    throw IndexOutOfRange("ky_fan_sum: k = " + std::to_string(k) +
                          " outside [1, " + std::to_string(a.n()) + "]");
  return eigh(a).spectrum.top_sum(k);
}

HermitianMatrix frame_compression(const HermitianMatrix& m,
                                  const OrthonormalFrame& f) {
  if (m.n() != f.ambient())
    throw DimensionMismatch("frame ambient dimension " +
                            std::to_string(f.ambient()) +
                            " does not match matrix dimension " +
                            std::to_string(m.n()));
  return HermitianMatrix(f.vectors().adjoint() * m.mat() * f.vectors());
}

double invariant_residual(const HermitianMatrix& m, const OrthonormalFrame& f) {
  if (m.n() != f.ambient())
    throw DimensionMismatch("frame ambient dimension " +
                            std::to_string(f.ambient()) +
                            " does not match matrix dimension " +
                            std::to_string(m.n()));
  // (I - P) M P = ((I - FF*) M F) F*, and right-multiplying by F* preserves
  // the Frobenius norm
  Matrix mf = m.mat() * f.vectors();
  Matrix x = mf - f.vectors() * (f.vectors().adjoint() * mf);
  return x.norm();
}

TopKSplit top_k_spectral_structure(const HermitianMatrix& b, int k,
                                   double tol_cluster) {
  const int n = b.n();
  if (k < 1 || k > n - 1)
    throw IndexOutOfRange("top_k_spectral_structure: k = " + std::to_string(k) +
                          " outside [1, n-1] with n = " + std::to_string(n));
  EigenDecomposition ed = eigh(b);
  ClusterStructure cs = cluster_spectrum(ed.spectrum, tol_cluster);
  const int c = cs.cluster_of(k - 1);
  TopKSplit split;
  split.boundary = ed.frame.vectors().middleCols(cs.begin(c), cs.multiplicity(c));
  if (cs.end(c) == k) {
    // cluster boundary falls exactly at k: the whole candidate is forced
    split.forced = ed.frame.vectors().leftCols(k);
    split.deficiency = 0;
  } else {
    split.forced = ed.frame.vectors().leftCols(cs.begin(c));
    split.deficiency = k - cs.begin(c);
  }
  return split;
}

HermitianMatrix random_hermitian(int n, std::uint64_t seed,
                                 const std::optional<std::vector<double>>& spec) {
  if (n < 1) throw InvalidArgument("random_hermitian: n must be >= 1");
  Rng rng(seed);
  if (spec) {
    if (static_cast<int>(spec->size()) != n)
      throw BadSpec("spectrum spec has length " + std::to_string(spec->size()) +
                    ", expected " + std::to_string(n));
    Matrix q = random_unitary(n, rng);
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = (*spec)[i];
    return HermitianMatrix(q * d.cast<Complex>().asDiagonal() * q.adjoint());
  }
  Matrix g = complex_gaussian(n, n, rng);
  return HermitianMatrix(g);  // constructor symmetrizes
}

}  // namespace wielandt
