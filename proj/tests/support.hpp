#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "wielandt/core.hpp"
#include "wielandt/types.hpp"

namespace testsupport {

using wielandt::Complex;
using wielandt::HermitianMatrix;
using wielandt::Matrix;
using wielandt::OrthonormalFrame;
using wielandt::Vector;

inline HermitianMatrix diag(std::initializer_list<double> values) {
  Vector d(static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) d(i++) = v;
  return HermitianMatrix::diagonal(d);
}

inline HermitianMatrix mat2(Complex a00, Complex a01, Complex a10, Complex a11) {
  Matrix m(2, 2);
  m << a00, a01, a10, a11;
  return HermitianMatrix(m);
}

inline OrthonormalFrame basis_frame(int n, std::initializer_list<int> cols) {
  Matrix m = Matrix::Zero(n, static_cast<int>(cols.size()));
  int c = 0;
  for (int i : cols) m(i, c++) = 1.0;
  return OrthonormalFrame(std::move(m));
}

/// Random orthonormal k-frame in C^n (first k columns of a random unitary).
inline OrthonormalFrame random_frame(int n, int k, wielandt::Rng& rng) {
  return OrthonormalFrame::trusted(wielandt::random_unitary(n, rng).leftCols(k));
}

inline double max_abs_diff(const Vector& v, std::initializer_list<double> expect) {
  double worst = 0.0;
  int i = 0;
  for (double e : expect) worst = std::max(worst, std::abs(v(i++) - e));
  return worst;
}

inline double max_abs_diff(const std::vector<double>& v,
                           const std::vector<double>& w) {
  double worst = 0.0;
  for (size_t i = 0; i < v.size(); ++i)
    worst = std::max(worst, std::abs(v[i] - w[i]));
  return worst;
}

}  // namespace testsupport
