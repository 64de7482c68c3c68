#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "wielandt/errors.hpp"

namespace wielandt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

/// The three named tolerances used throughout. Exact identities of the theory
/// become banded predicates; every band is derived from one of these knobs.
struct Tolerances {
  double hermiticity = 1e-10;  ///< absolute bound on max-abs deviation from M*
  double cluster = 1e-8;       ///< relative: gap <= cluster * (1 + max|value|)
  double residual = 1e-8;      ///< relative to 1 + ||A||_F + ||B||_F
};

/// Dense n x n complex matrix with the Hermitian-symmetry invariant enforced
/// at construction: the stored matrix is always (M + M*)/2.
///
/// Immutable after construction; safe to share read-only across threads.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& m) {
    if (m.rows() != m.cols())
      throw NotSquare("matrix is not square: " + std::to_string(m.rows()) +
                      "x" + std::to_string(m.cols()));
    if (m.rows() < 1) throw InvalidArgument("matrix dimension must be >= 1");
    mat_ = 0.5 * (m + m.adjoint());
  }

  static HermitianMatrix diagonal(const Vector& d) {
    Matrix m = Matrix::Zero(d.size(), d.size());
    for (int i = 0; i < d.size(); ++i) m(i, i) = d(i);
    return HermitianMatrix(m);
  }

  static HermitianMatrix identity(int n) {
    return HermitianMatrix(Matrix::Identity(n, n));
  }

  static HermitianMatrix zero(int n) {
    return HermitianMatrix(Matrix::Zero(n, n));
  }

  int n() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  double frobenius() const { return mat_.norm(); }

 private:
  Matrix mat_;
};

/// A + t B, the Hermitian pencil evaluated at a real parameter.
inline HermitianMatrix pencil_at(const HermitianMatrix& a,
                                 const HermitianMatrix& b, double t) {
  if (a.n() != b.n())
    throw DimensionMismatch("pencil terms have dimensions " +
                            std::to_string(a.n()) + " and " +
                            std::to_string(b.n()));
  return HermitianMatrix(a.mat() + t * b.mat());
}

inline HermitianMatrix operator+(const HermitianMatrix& a,
                                 const HermitianMatrix& b) {
  return pencil_at(a, b, 1.0);
}

inline HermitianMatrix scale(const HermitianMatrix& a, double c) {
  return HermitianMatrix(c * a.mat());
}

/// Residual-style tolerances are relative to the scale of the data.
inline double scaled_residual_tol(double tol, const HermitianMatrix& a) {
  return tol * (1.0 + a.frobenius());
}
inline double scaled_residual_tol(double tol, const HermitianMatrix& a,
                                  const HermitianMatrix& b) {
  return tol * (1.0 + a.frobenius() + b.frobenius());
}

/// Eigenvalues in non-increasing order, counted with multiplicity.
class Spectrum {
 public:
  static Spectrum from_sorted(Vector v) {
    for (int i = 0; i + 1 < v.size(); ++i)
      if (v(i) < v(i + 1))
        throw InvalidArgument("spectrum values are not non-increasing");
    return Spectrum(std::move(v));
  }

  static Spectrum from_unsorted(Vector v) {
    std::sort(v.data(), v.data() + v.size(), std::greater<double>());
    return Spectrum(std::move(v));
  }

  int n() const { return static_cast<int>(values_.size()); }
  const Vector& values() const { return values_; }
  double operator[](int i) const { return values_(i); }
  double max_abs() const {
    return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
  }

  /// Sum of the k largest eigenvalues; for k = n this is the trace.
  double top_sum(int k) const {
    if (k < 1 || k > n())
      throw IndexOutOfRange("top_sum: k = " + std::to_string(k) +
                            " outside [1, " + std::to_string(n()) + "]");
    return values_.head(k).sum();
  }

 private:
  explicit Spectrum(Vector v) : values_(std::move(v)) {}
  Vector values_;
};

/// Partition of a sorted spectrum into clusters of (numerically) equal
/// eigenvalues: boundaries m_0 = 0 < m_1 < ... < m_l = n.
struct ClusterStructure {
  std::vector<int> boundaries;         ///< size count()+1, first 0, last n
  std::vector<double> representatives; ///< one value per cluster (mean)

  int count() const { return static_cast<int>(boundaries.size()) - 1; }
  int n() const { return boundaries.back(); }
  int begin(int c) const { return boundaries[c]; }      // 0-based, inclusive
  int end(int c) const { return boundaries[c + 1]; }    // exclusive
  int multiplicity(int c) const { return end(c) - begin(c); }

  int cluster_of(int pos) const {  // 0-based position
    if (pos < 0 || pos >= n())
      throw IndexOutOfRange("cluster_of: position " + std::to_string(pos));
    int c = 0;
    while (boundaries[c + 1] <= pos) ++c;
    return c;
  }
};

/// k orthonormal vectors in C^n, stored as the columns of an n x k matrix.
class OrthonormalFrame {
 public:
  explicit OrthonormalFrame(Matrix vectors, double tol = 1e-8)
      : vectors_(std::move(vectors)) {
    const int n = static_cast<int>(vectors_.rows());
    const int k = static_cast<int>(vectors_.cols());
    if (k < 1 || k > n)
      throw InvalidArgument("frame size k = " + std::to_string(k) +
                            " outside [1, n = " + std::to_string(n) + "]");
    Matrix g = vectors_.adjoint() * vectors_;
    double dev = (g - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
    if (dev > tol)
      throw InvalidArgument("frame is not orthonormal: max Gram deviation " +
                            std::to_string(dev));
  }

  /// Fast path for columns that are orthonormal by construction.
  static OrthonormalFrame trusted(Matrix vectors) {
    return OrthonormalFrame(std::move(vectors), TrustedTag{});
  }

  int ambient() const { return static_cast<int>(vectors_.rows()); }
  int size() const { return static_cast<int>(vectors_.cols()); }
  const Matrix& vectors() const { return vectors_; }

 private:
  struct TrustedTag {};
  OrthonormalFrame(Matrix vectors, TrustedTag) : vectors_(std::move(vectors)) {}
  Matrix vectors_;
};

/// Full eigendecomposition with the deterministic ordering conventions:
/// spectrum non-increasing, column i of the frame pairs with spectrum[i].
struct EigenDecomposition {
  Spectrum spectrum;
  OrthonormalFrame frame;
};

}  // namespace wielandt
