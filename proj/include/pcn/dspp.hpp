#ifndef PCN_DSPP_HPP_
#define PCN_DSPP_HPP_

#include <optional>
#include <string_view>

#include "pcn/matrix.hpp"

namespace pcn {

struct Dims {
  Index n = 0;
  Index m = 0;
  Index p = 0;

  Index l() const { return n + m + p; }
  // Number of entries in (A, B, C, D, E).
  Index s() const { return n * n + m * n + p * m + m * m + p * p; }

  bool operator==(const Dims&) const = default;
};

// The five blocks and right-hand side of a double saddle point system
//
//   [ A  B^T  0  ] [x]   [b1]
//   [ B  -D   C^T] [y] = [b2]
//   [ 0   C   E  ] [z]   [b3]
//
// with A n x n, B m x n, C p x m, D m x m, E p x p. D is stored un-negated.
class DsppBlocks {
 public:
  DsppBlocks(Matrix a, Matrix b, Matrix c, Matrix d, Matrix e, Vector rhs);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& C() const { return c_; }
  const Matrix& D() const { return d_; }
  const Matrix& E() const { return e_; }
  const Vector& rhs() const { return rhs_; }

  auto b1() const { return rhs_.head(dims_.n); }
  auto b2() const { return rhs_.segment(dims_.n, dims_.m); }
  auto b3() const { return rhs_.tail(dims_.p); }

  Dims dims() const { return dims_; }

 private:
  Matrix a_, b_, c_, d_, e_;
  Vector rhs_;
  Dims dims_;
};

Matrix assemble(const DsppBlocks& blocks);

class Solution {
 public:
  Solution(Vector w, Dims dims);

  const Vector& w() const { return w_; }
  Dims dims() const { return dims_; }

  auto x() const { return w_.head(dims_.n); }
  auto y() const { return w_.segment(dims_.n, dims_.m); }
  auto z() const { return w_.tail(dims_.p); }

 private:
  Vector w_;
  Dims dims_;
};

Solution solve_dspp(const DsppBlocks& blocks);

enum class SelectorKind { Full, XPart, YPart, ZPart, Custom };

std::string_view to_string(SelectorKind kind);
SelectorKind parse_selector_kind(std::string_view name);

struct Selector {
  SelectorKind kind = SelectorKind::Full;
  Matrix L;

  Index rows() const { return L.rows(); }
};

// Full: I_l, XPart: [I_n 0], YPart: [0 I_m 0], ZPart: [0 I_p].
// Custom requires custom_L with l columns and at most l rows.
Selector make_selector(SelectorKind kind, Dims dims,
                       const std::optional<Matrix>& custom_L = std::nullopt);

// Assembled and factorized system, reused across selectors and CN flavors.
class DsppSystem {
 public:
  explicit DsppSystem(DsppBlocks blocks);

  const DsppBlocks& blocks() const { return blocks_; }
  Dims dims() const { return blocks_.dims(); }
  const Matrix& matrix() const { return matrix_; }
  const LuSolver& lu() const { return lu_; }
  const Solution& solution() const { return solution_; }

  // L * inv(B), computed from the transposed solve B^T X^T = L^T.
  Matrix selected_inverse(const Selector& sel) const;

 private:
  DsppBlocks blocks_;
  Matrix matrix_;
  LuSolver lu_;
  Solution solution_;
};

}  // namespace pcn

#endif  // PCN_DSPP_HPP_
