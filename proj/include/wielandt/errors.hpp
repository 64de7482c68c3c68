#pragma once

#include <stdexcept>
#include <string>

namespace wielandt {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotSquare : Error {
  using Error::Error;
};

/// Input failed the hermiticity check; carries the worst offending entry.
struct NotHermitian : Error {
  NotHermitian(int row_, int col_, double deviation_, double tol_)
      : Error("matrix is not Hermitian: |M(" + std::to_string(row_) + "," +
              std::to_string(col_) + ") - conj(M(" + std::to_string(col_) +
              "," + std::to_string(row_) + "))| = " + std::to_string(deviation_) +
              " exceeds tolerance " + std::to_string(tol_)),
        row(row_), col(col_), deviation(deviation_) {}
  int row = 0;
  int col = 0;
  double deviation = 0.0;
};

struct ConvergenceFailure : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct BadSpec : Error {
  using Error::Error;
};

struct ScanTooLarge : Error {
  using Error::Error;
};

/// A combinatorial search exceeded its configured cap; reported rather than
/// silently truncated.
struct CombinatorialCap : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

/// Certification aborted; the message names the first violated invariant and
/// where it was observed.
struct CertificationFailure : Error {
  using Error::Error;
};

}  // namespace wielandt
