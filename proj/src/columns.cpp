#include "pcn/columns.hpp"

#include <cmath>
#include <vector>

namespace pcn {

ParameterLayout ParameterLayout::of(Dims dims) {
  const auto [n, m, p] = dims;
  ParameterLayout out;
  out.a = 0;
  out.b = out.a + n * n;
  out.c = out.b + m * n;
  out.d = out.c + p * m;
  out.e = out.d + m * m;
  out.rhs = out.e + p * p;
  out.total = out.rhs + n + m + p;
  return out;
}

SparseMatrix sensitivity_columns(const Solution& sol) {
  const Dims dims = sol.dims();
  const auto [n, m, p] = dims;
  const ParameterLayout at = ParameterLayout::of(dims);
  const auto x = sol.x();
  const auto y = sol.y();
  const auto z = sol.z();

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n * n + 2 * m * n + 2 * p * m + m * m + p * p + dims.l()));
  // vec(dA): A x
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) t.emplace_back(i, at.a + j * n + i, x[j]);
  // vec(dB): B^T y in the first row block, B x in the second
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) {
      t.emplace_back(j, at.b + j * m + i, y[i]);
      t.emplace_back(n + i, at.b + j * m + i, x[j]);
    }
  // vec(dC): C^T z in the second row block, C y in the third
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < p; ++i) {
      t.emplace_back(n + j, at.c + j * p + i, z[i]);
      t.emplace_back(n + m + i, at.c + j * p + i, y[j]);
    }
  // vec(dD): -D y
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) t.emplace_back(n + i, at.d + j * m + i, -y[j]);
  // vec(dE): E z
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i) t.emplace_back(n + m + i, at.e + j * p + i, z[j]);
  for (Index i = 0; i < dims.l(); ++i) t.emplace_back(i, at.rhs + i, -1.0);

  SparseMatrix out(dims.l(), at.total);
  out.setFromTriplets(t.begin(), t.end());
  out.prune(0.0);
  return out;
}

Vector abs_weighted_row_sums(const Matrix& Y, const SparseMatrix& cols, const Vector& weights) {
  if (Y.cols() != cols.rows() || weights.size() != cols.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "abs_weighted_row_sums: shape mismatch");
  }
  Vector acc = Vector::Zero(Y.rows());
  Vector column(Y.rows());
  for (Index c = 0; c < cols.outerSize(); ++c) {
    const double w = std::abs(weights[c]);
    if (w == 0.0) continue;
    column.setZero();
    for (SparseMatrix::InnerIterator it(cols, c); it; ++it) {
      column.noalias() += it.value() * Y.col(it.row());
    }
    acc += w * column.cwiseAbs();
  }
  return acc;
}

double weighted_two_norm(const Matrix& Y, const SparseMatrix& cols, const Vector& weights,
                         const Vector& row_scale) {
  if (Y.cols() != cols.rows() || weights.size() != cols.cols() || row_scale.size() != Y.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "weighted_two_norm: shape mismatch");
  }
  const SparseMatrix scaled = cols * weights.asDiagonal();
  const Matrix inner = Matrix(scaled * SparseMatrix(scaled.transpose()));
  const Matrix sy = row_scale.asDiagonal() * Y;
  Matrix gram = sy * inner * sy.transpose();
  gram = 0.5 * (gram + gram.transpose()).eval();
  return std::sqrt(std::max(0.0, largest_symmetric_eigenvalue(gram)));
}

}  // namespace pcn
