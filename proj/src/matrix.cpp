#include "pcn/matrix.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pcn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::ZeroXi: return "ZeroXi";
    case ErrorCode::NotInSubspace: return "NotInSubspace";
    case ErrorCode::UnsupportedStructure: return "UnsupportedStructure";
    case ErrorCode::RankDeficientC: return "RankDeficientC";
    case ErrorCode::IndefiniteOnNullspace: return "IndefiniteOnNullspace";
    case ErrorCode::IncompatibleZeroPattern: return "IncompatibleZeroPattern";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, what + " contains a non-finite entry");
  }
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "unvec: length does not match shape");
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

Vector ddagger(const Vector& z) {
  Vector out(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    out[i] = z[i] != 0.0 ? 1.0 / z[i] : 1.0;
  }
  return out;
}

Vector entrywise_divide(const Vector& z, const Vector& w) {
  if (z.size() != w.size()) {
    throw Error(ErrorCode::DimensionMismatch, "entrywise_divide: length mismatch");
  }
  return ddagger(w).cwiseProduct(z);
}

Matrix hadamard(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "hadamard: shape mismatch");
  }
  return x.cwiseProduct(y);
}

double induced_norm(const Matrix& m, NormKind kind) {
  if (m.size() == 0) return 0.0;
  if (kind == NormKind::Inf) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double largest_symmetric_eigenvalue(const Matrix& sym) {
  if (sym.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

LuSolver::LuSolver(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "LuSolver: matrix must be square and nonempty");
  }
  const double scale = induced_norm(m, NormKind::Inf);
  lu_.compute(m);
  const double smallest_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(scale > 0.0) || smallest_pivot < kPivotTolerance * scale) {
    throw Error(ErrorCode::SingularMatrix,
                "matrix is numerically singular (pivot " + std::to_string(smallest_pivot) +
                    ", ||M||_inf " + std::to_string(scale) + ")");
  }
}

Vector LuSolver::solve(const Vector& rhs) const {
  if (rhs.size() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "solve: rhs length mismatch");
  }
  return lu_.solve(rhs);
}

Matrix LuSolver::solve(const Matrix& rhs) const {
  if (rhs.rows() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "solve: rhs row count mismatch");
  }
  return lu_.solve(rhs);
}

Matrix LuSolver::solve_transposed(const Matrix& rhs) const {
  if (rhs.rows() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "solve_transposed: rhs row count mismatch");
  }
  return lu_.transpose().solve(rhs);
}

Vector solve(const Matrix& m, const Vector& rhs) {
  return LuSolver(m).solve(rhs);
}

SpectralTriple spectral_top(const Matrix& m) {
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorCode::ZeroMatrix, "spectral_top: matrix is zero");
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

}  // namespace pcn
