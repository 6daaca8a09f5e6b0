#ifndef PCN_COLUMNS_HPP_
#define PCN_COLUMNS_HPP_

// Sparse view of the first-order sensitivity map. Every input parameter of
// the system (an entry of A, B, C, D, E or of b) owns one column of
// [G  -I]; a column has at most two nonzeros, so the CN formulas are
// evaluated column by column instead of through explicit Kronecker products.

#include <Eigen/SparseCore>

#include "pcn/dspp.hpp"

namespace pcn {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

// Column offsets of each parameter block inside [vec H; b].
struct ParameterLayout {
  Index a = 0, b = 0, c = 0, d = 0, e = 0, rhs = 0, total = 0;

  static ParameterLayout of(Dims dims);
};

// The l x (s + l) matrix [G  -I] in sparse form.
SparseMatrix sensitivity_columns(const Solution& sol);

// Entries  sum_c |(Y * cols)_{r,c}| * |w_c|  for each row r of Y.
// Columns with zero weight are skipped.
Vector abs_weighted_row_sums(const Matrix& Y, const SparseMatrix& cols, const Vector& weights);

// || diag(row_scale) * Y * cols * diag(w) ||_2, evaluated through the k x k
// Gram matrix so the k x ncols product is never stored.
double weighted_two_norm(const Matrix& Y, const SparseMatrix& cols, const Vector& weights,
                         const Vector& row_scale);

}  // namespace pcn

#endif  // PCN_COLUMNS_HPP_
