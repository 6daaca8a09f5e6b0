#include "pcn/eils.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

namespace pcn {

namespace {

void require_shape(const Matrix& m, Index rows, Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

EilsProblem::EilsProblem(Matrix M, Matrix C, Index n1, Index n2, Vector b, Vector d)
    : M_(std::move(M)), C_(std::move(C)), n1_(n1), n2_(n2), b_(std::move(b)), d_(std::move(d)) {
  const Index n = M_.rows(), m = M_.cols(), p = C_.rows();
  if (n < 1 || m < 1 || p < 1) throw Error(ErrorCode::DimensionMismatch, "EILS blocks must be non-empty");
  if (n < m) throw Error(ErrorCode::InvalidArgument, "EILS requires n >= m");
  if (n1_ < 0 || n2_ < 0 || n1_ + n2_ != n) {
    throw Error(ErrorCode::InvalidArgument, "signature split must satisfy n1 + n2 = n");
  }
  require_shape(C_, p, m, "C");
  if (b_.size() != n) throw Error(ErrorCode::DimensionMismatch, "b must have length n");
  if (d_.size() != p) throw Error(ErrorCode::DimensionMismatch, "d must have length p");
  require_finite(M_, "M");
  require_finite(C_, "C");
  require_finite(b_, "b");
  require_finite(d_, "d");

  const double c_norm = induced_norm(C_, NormKind::Inf);
  if (c_norm == 0.0 || p > m) throw Error(ErrorCode::RankDeficientC, "C does not have full row rank");
  Eigen::ColPivHouseholderQR<Matrix> qr(C_);
  qr.setThreshold(1e-10 * c_norm / qr.maxPivot());
  if (qr.rank() != p) throw Error(ErrorCode::RankDeficientC, "C does not have full row rank");

  // Null space of C from a full QR of C^T: the trailing m - p columns of Q.
  if (p < m) {
    Eigen::HouseholderQR<Matrix> ct(C_.transpose());
    const Matrix q = ct.householderQ() * Matrix::Identity(m, m);
    const Matrix null_basis = q.rightCols(m - p);
    const Matrix jm = signature() * M_;
    Matrix reduced = null_basis.transpose() * (M_.transpose() * jm) * null_basis;
    reduced = 0.5 * (reduced + reduced.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
      throw Error(ErrorCode::IndefiniteOnNullspace,
                  "M^T J M is not positive definite on the null space of C");
    }
  }
}

Matrix EilsProblem::signature() const {
  Vector diag(n());
  diag.head(n1_).setOnes();
  diag.tail(n2_).setConstant(-1.0);
  return diag.asDiagonal();
}

DsppBlocks eils_reduce(const EilsProblem& prob) {
  const Index n = prob.n(), m = prob.m(), p = prob.p();
  Vector rhs = Vector::Zero(n + m + p);
  rhs.head(n) = prob.b();
  rhs.tail(p) = prob.d();
  return DsppBlocks(prob.signature(), prob.M().transpose(), prob.C(), Matrix::Zero(m, m),
                    Matrix::Zero(p, p), std::move(rhs));
}

EilsSolution solve_eils(const EilsProblem& prob) {
  const Solution sol = solve_dspp(eils_reduce(prob));
  EilsSolution out;
  out.y = sol.y();
  out.x = sol.x();
  out.lambda = sol.z();
  out.r = prob.b() - prob.M() * out.y;

  const double miss = (prob.C() * out.y - prob.d()).norm();
  const double tol = 1e-8 * (induced_norm(prob.C(), NormKind::Inf) * out.y.norm() + prob.d().norm());
  if (miss > tol) {
    throw Error(ErrorCode::InvariantViolation,
                "constraint residual " + std::to_string(miss) + " exceeds tolerance");
  }
  return out;
}

EilsWeights EilsWeights::scalar(double psi, double chi) {
  if (!(psi > 0.0) || !(chi > 0.0) || !std::isfinite(psi) || !std::isfinite(chi)) {
    throw Error(ErrorCode::InvalidArgument, "scalar weights must be positive and finite");
  }
  EilsWeights w;
  w.mode = Mode::Scalar;
  w.psi = psi;
  w.chi = chi;
  return w;
}

EilsWeights EilsWeights::entrywise(Matrix psi_M, Matrix psi_C, Vector chi_b, Vector chi_d) {
  require_finite(psi_M, "psi_M");
  require_finite(psi_C, "psi_C");
  require_finite(chi_b, "chi_b");
  require_finite(chi_d, "chi_d");
  EilsWeights w;
  w.mode = Mode::Entrywise;
  w.psi_M = std::move(psi_M);
  w.psi_C = std::move(psi_C);
  w.chi_b = std::move(chi_b);
  w.chi_d = std::move(chi_d);
  return w;
}

EilsWeights EilsWeights::from_data(const EilsProblem& prob) {
  return entrywise(prob.M().cwiseAbs(), prob.C().cwiseAbs(), prob.b().cwiseAbs(),
                   prob.d().cwiseAbs());
}

Vector EilsWeights::column_weights(const EilsProblem& prob) const {
  const Index n = prob.n(), m = prob.m(), p = prob.p();
  const Index total = n * m + p * m + n + p;
  if (mode == Mode::Scalar) {
    Vector out(total);
    out.head(n * m + p * m).setConstant(psi);
    out.tail(n + p).setConstant(chi);
    return out;
  }
  require_shape(psi_M, n, m, "psi_M");
  require_shape(psi_C, p, m, "psi_C");
  if (chi_b.size() != n || chi_d.size() != p) {
    throw Error(ErrorCode::DimensionMismatch, "chi_b / chi_d have the wrong length");
  }
  Vector out(total);
  out << vec(psi_M), vec(psi_C), chi_b, chi_d;
  return out;
}

Matrix build_g_hat(const Solution& sol) {
  const auto [n, m, p] = sol.dims();
  const Matrix x = sol.x();
  const Matrix y = sol.y();
  const Matrix z = sol.z();
  Matrix g = Matrix::Zero(n + m + p, n * m + p * m);
  g.block(0, 0, n, n * m) = kron(y.transpose(), Matrix::Identity(n, n));
  g.block(n, 0, m, n * m) = kron(Matrix::Identity(m, m), x.transpose());
  g.block(n, n * m, m, p * m) = kron(Matrix::Identity(m, m), z.transpose());
  g.block(n + m, n * m, p, p * m) = kron(y.transpose(), Matrix::Identity(p, p));
  return g;
}

CnValue eils_cn(const EilsProblem& prob, const Selector& sel, const EilsWeights& weights,
                const XiChoice& xi, NormKind norm) {
  const Index n = prob.n(), m = prob.m(), p = prob.p();
  const DsppSystem system(eils_reduce(prob));
  if (sel.L.cols() != system.dims().l()) {
    throw Error(ErrorCode::DimensionMismatch, "selector does not match the reduced system");
  }
  const Matrix Y = system.selected_inverse(sel);
  const Vector scale = ddagger(xi.resolve(sel.L * system.solution().w()));

  const Index ng = n * m + p * m;
  Matrix cols = Matrix::Zero(n + m + p, ng + n + p);
  cols.leftCols(ng) = build_g_hat(system.solution());
  for (Index i = 0; i < n; ++i) cols(i, ng + i) = -1.0;
  for (Index i = 0; i < p; ++i) cols(n + m + i, ng + n + i) = -1.0;

  const Matrix full = scale.asDiagonal() * Y * cols * weights.column_weights(prob).asDiagonal();
  if (norm == NormKind::Two) return {induced_norm(full, NormKind::Two), CnFlavor::Eils2};
  return {induced_norm(full, NormKind::Inf), CnFlavor::EilsInf};
}

}  // namespace pcn
