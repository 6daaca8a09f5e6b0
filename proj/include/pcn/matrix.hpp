#ifndef PCN_MATRIX_HPP_
#define PCN_MATRIX_HPP_

// Dense kernel shared by every other module. Matrices and vectors are plain
// Eigen column-major types, so vec() is column stacking and all Kronecker
// identities (vec(AZB) = (B^T kron A) vec(Z) etc.) hold as written.

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pcn {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorCode {
  DimensionMismatch,
  NonFinite,
  SingularMatrix,
  ZeroMatrix,
  ZeroXi,
  NotInSubspace,
  UnsupportedStructure,
  RankDeficientC,
  IndefiniteOnNullspace,
  IncompatibleZeroPattern,
  InvalidArgument,
  InvariantViolation,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class NormKind { Two, Inf };

// Throws Error(NonFinite) if any entry is NaN or +-Inf.
void require_finite(const Matrix& m, const std::string& what);

/// Column stacking: entry (i, j) lands at position j * rows + i.
Vector vec(const Matrix& m);

/// Inverse of vec for a rows x cols shape.
Matrix unvec(const Vector& v, Index rows, Index cols);

/// X kron Y, block (i, j) equal to x_ij * Y.
Matrix kron(const Matrix& x, const Matrix& y);

/// Entrywise pseudo-reciprocal: 1 / z_i for nonzero z_i, exactly 1 otherwise.
Vector ddagger(const Vector& z);

/// Entrywise division z / w, defined as ddagger(w) .* z.
Vector entrywise_divide(const Vector& z, const Vector& w);

Matrix hadamard(const Matrix& x, const Matrix& y);

/// kind == Two: largest singular value (full SVD). kind == Inf: max abs row sum.
double induced_norm(const Matrix& m, NormKind kind);

/// Largest eigenvalue of a symmetric matrix; only the lower triangle is read.
double largest_symmetric_eigenvalue(const Matrix& sym);

// Row-pivoted LU factorization. Construction fails with SingularMatrix when a
// pivot falls below 1e-14 * ||M||_inf.
class LuSolver {
 public:
  static constexpr double kPivotTolerance = 1e-14;

  explicit LuSolver(const Matrix& m);

  Index size() const { return lu_.rows(); }

  Vector solve(const Vector& rhs) const;
  Matrix solve(const Matrix& rhs) const;
  // Solves M^T X = rhs.
  Matrix solve_transposed(const Matrix& rhs) const;

 private:
  Eigen::PartialPivLU<Matrix> lu_;
};

Vector solve(const Matrix& m, const Vector& rhs);

struct SpectralTriple {
  double sigma = 0.0;
  Vector u;
  Vector v;
};

// Dominant singular triple, M v = sigma u with unit u and v.
SpectralTriple spectral_top(const Matrix& m);

}  // namespace pcn

#endif  // PCN_MATRIX_HPP_
