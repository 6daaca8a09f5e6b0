#ifndef PCN_EILS_HPP_
#define PCN_EILS_HPP_

// Equality-constrained indefinite least squares
//
//   min_y (b - M y)^T J (b - M y)   subject to   C y = d,   J = diag(I_n1, -I_n2),
//
// solved through the equivalent double saddle point system
//
//   [ J    M   0  ] [ x ]   [ b ]
//   [ M^T  0   C^T] [ y ] = [ 0 ]      x = J (b - M y), lambda = Lagrange multipliers.
//   [ 0    C   0  ] [ l ]   [ d ]
//
// Only M, C, b and d are perturbed; J and the zero blocks are exact.

#include "pcn/dspp.hpp"
#include "pcn/partial_cn.hpp"

namespace pcn {

class EilsProblem {
 public:
  // Throws DimensionMismatch, NonFinite, InvalidArgument (n < m or n1 + n2 != n),
  // RankDeficientC, or IndefiniteOnNullspace.
  EilsProblem(Matrix M, Matrix C, Index n1, Index n2, Vector b, Vector d);

  const Matrix& M() const { return M_; }
  const Matrix& C() const { return C_; }
  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  const Vector& b() const { return b_; }
  const Vector& d() const { return d_; }

  Index n() const { return M_.rows(); }
  Index m() const { return M_.cols(); }
  Index p() const { return C_.rows(); }

  // diag(I_n1, -I_n2)
  Matrix signature() const;

 private:
  Matrix M_, C_;
  Index n1_, n2_;
  Vector b_, d_;
};

struct EilsSolution {
  Vector y;
  Vector r;  // b - M y
  Vector x;  // J r
  Vector lambda;
};

// A = J, B = M^T, C = C, D = 0, E = 0, b = [b; 0; d].
DsppBlocks eils_reduce(const EilsProblem& prob);

// Throws InvariantViolation if the computed y misses C y = d by more than
// 1e-8 * (||C||_inf ||y||_2 + ||d||_2).
EilsSolution solve_eils(const EilsProblem& prob);

// Perturbation scaling for (M, C, b, d).
struct EilsWeights {
  enum class Mode { Scalar, Entrywise };

  Mode mode = Mode::Scalar;
  double psi = 1.0;
  double chi = 1.0;
  Matrix psi_M, psi_C;
  Vector chi_b, chi_d;

  static EilsWeights scalar(double psi, double chi);
  static EilsWeights entrywise(Matrix psi_M, Matrix psi_C, Vector chi_b, Vector chi_d);
  // |M|, |C|, |b|, |d|
  static EilsWeights from_data(const EilsProblem& prob);

  // [vec(Psi_M); vec(Psi_C); chi_b; chi_d]
  Vector column_weights(const EilsProblem& prob) const;
};

// Dense l x (nm + pm) matrix G_hat for the solution of the reduced system:
//   [ y^T (x) I_n    0           ]   columns: vec(dM), vec(dC)
//   [ I_m (x) x^T    I_m (x) z^T ]
//   [ 0              y^T (x) I_p ]
Matrix build_g_hat(const Solution& sol);

// || diag(xi^dagger) L inv(B) [G_hat  -I_(b1,b3)] diag(weights) ||, in the 2- or inf-norm.
CnValue eils_cn(const EilsProblem& prob, const Selector& sel, const EilsWeights& weights,
                const XiChoice& xi, NormKind norm);

}  // namespace pcn

#endif  // PCN_EILS_HPP_
