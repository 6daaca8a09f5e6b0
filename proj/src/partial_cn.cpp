#include "pcn/partial_cn.hpp"

#include <cmath>
#include <string>

#include "pcn/columns.hpp"

namespace pcn {
namespace {

void require_shape(const Matrix& m, Index rows, Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::DimensionMismatch, std::string("weight ") + name + " has the wrong shape");
  }
}

}  // namespace

PerturbationWeights PerturbationWeights::scalar(double psi, double chi) {
  if (!(psi > 0.0) || !(chi > 0.0) || !std::isfinite(psi) || !std::isfinite(chi)) {
    throw Error(ErrorCode::InvalidArgument, "scalar weights psi and chi must be positive");
  }
  PerturbationWeights w;
  w.mode = Mode::Scalar;
  w.psi = psi;
  w.chi = chi;
  return w;
}

PerturbationWeights PerturbationWeights::entrywise(Matrix psi_A, Matrix psi_B, Matrix psi_C,
                                                   Matrix psi_D, Matrix psi_E, Vector chi_b) {
  PerturbationWeights w;
  w.mode = Mode::Entrywise;
  w.psi_A = std::move(psi_A);
  w.psi_B = std::move(psi_B);
  w.psi_C = std::move(psi_C);
  w.psi_D = std::move(psi_D);
  w.psi_E = std::move(psi_E);
  w.chi_b = std::move(chi_b);
  return w;
}

PerturbationWeights PerturbationWeights::from_data(const DsppBlocks& blocks) {
  return entrywise(blocks.A().cwiseAbs(), blocks.B().cwiseAbs(), blocks.C().cwiseAbs(),
                   blocks.D().cwiseAbs(), blocks.E().cwiseAbs(), blocks.rhs().cwiseAbs());
}

Vector PerturbationWeights::column_weights(Dims dims) const {
  const ParameterLayout at = ParameterLayout::of(dims);
  Vector out(at.total);
  if (mode == Mode::Scalar) {
    out.head(at.rhs).setConstant(psi);
    out.tail(dims.l()).setConstant(chi);
    return out;
  }
  const auto [n, m, p] = dims;
  require_shape(psi_A, n, n, "Psi_A");
  require_shape(psi_B, m, n, "Psi_B");
  require_shape(psi_C, p, m, "Psi_C");
  require_shape(psi_D, m, m, "Psi_D");
  require_shape(psi_E, p, p, "Psi_E");
  if (chi_b.size() != dims.l()) {
    throw Error(ErrorCode::DimensionMismatch, "weight chi must have length n + m + p");
  }
  out << vec(psi_A), vec(psi_B), vec(psi_C), vec(psi_D), vec(psi_E), chi_b;
  require_finite(out, "perturbation weights");
  return out;
}

Vector XiChoice::resolve(const Vector& selected_solution) const {
  const Index k = selected_solution.size();
  switch (kind) {
    case Kind::Ncn: {
      const double norm = selected_solution.norm();
      if (norm == 0.0) throw Error(ErrorCode::ZeroXi, "L w is zero; normwise CN undefined");
      return Vector::Constant(k, norm);
    }
    case Kind::Mcn: {
      const double norm = k == 0 ? 0.0 : selected_solution.cwiseAbs().maxCoeff();
      if (norm == 0.0) throw Error(ErrorCode::ZeroXi, "L w is zero; mixed CN undefined");
      return Vector::Constant(k, norm);
    }
    case Kind::Ccn:
      return selected_solution;
    case Kind::Custom:
      if (custom.size() != k) {
        throw Error(ErrorCode::DimensionMismatch, "custom xi must have one entry per row of L");
      }
      return custom;
  }
  return selected_solution;
}

std::string_view to_string(CnFlavor flavor) {
  switch (flavor) {
    case CnFlavor::Unified2: return "unified2";
    case CnFlavor::UnifiedInf: return "unified_inf";
    case CnFlavor::Ncn: return "ncn";
    case CnFlavor::NcnKronFree: return "ncn_kronfree";
    case CnFlavor::NcnUpper: return "ncn_upper";
    case CnFlavor::Mcn: return "mcn";
    case CnFlavor::Ccn: return "ccn";
    case CnFlavor::McnUpper: return "mcn_upper";
    case CnFlavor::CcnUpper: return "ccn_upper";
    case CnFlavor::StructuredNcn: return "structured_ncn";
    case CnFlavor::StructuredUnifiedInf: return "structured_unified_inf";
    case CnFlavor::StructuredMcn: return "structured_mcn";
    case CnFlavor::StructuredCcn: return "structured_ccn";
    case CnFlavor::Eils2: return "eils2";
    case CnFlavor::EilsInf: return "eils_inf";
  }
  return "?";
}

Matrix build_g(const Solution& sol) {
  const auto [n, m, p] = sol.dims();
  const Matrix x = sol.x();
  const Matrix y = sol.y();
  const Matrix z = sol.z();
  const Matrix In = Matrix::Identity(n, n);
  const Matrix Im = Matrix::Identity(m, m);
  const Matrix Ip = Matrix::Identity(p, p);
  const ParameterLayout at = ParameterLayout::of(sol.dims());

  Matrix g = Matrix::Zero(n + m + p, at.rhs);
  g.block(0, at.a, n, n * n) = kron(x.transpose(), In);
  g.block(0, at.b, n, n * m) = kron(In, y.transpose());
  g.block(n, at.b, m, n * m) = kron(x.transpose(), Im);
  g.block(n, at.c, m, m * p) = kron(Im, z.transpose());
  g.block(n, at.d, m, m * m) = -kron(y.transpose(), Im);
  g.block(n + m, at.c, p, m * p) = kron(y.transpose(), Ip);
  g.block(n + m, at.e, p, p * p) = kron(z.transpose(), Ip);
  return g;
}

Matrix build_j(const Solution& sol) {
  const auto [n, m, p] = sol.dims();
  const double xx = sol.x().squaredNorm();
  const double yy = sol.y().squaredNorm();
  const double zz = sol.z().squaredNorm();

  Matrix j = Matrix::Zero(n + m + p, n + m + p);
  j.block(0, 0, n, n).diagonal().setConstant(xx + yy);
  j.block(n, n, m, m).diagonal().setConstant(xx + yy + zz);
  j.block(n + m, n + m, p, p).diagonal().setConstant(yy + zz);
  j.block(0, n, n, m) = sol.x() * sol.y().transpose();
  j.block(n, 0, m, n) = sol.y() * sol.x().transpose();
  j.block(n, n + m, m, p) = sol.y() * sol.z().transpose();
  j.block(n + m, n, p, m) = sol.z() * sol.y().transpose();
  return j;
}

PartialConditioner::PartialConditioner(DsppSystem system, Selector selector)
    : system_(std::move(system)),
      selector_(std::move(selector)),
      selected_inverse_(system_.selected_inverse(selector_)),
      selected_solution_(selector_.L * system_.solution().w()) {}

PartialConditioner::PartialConditioner(const DsppBlocks& blocks, Selector selector)
    : PartialConditioner(DsppSystem(blocks), std::move(selector)) {}

bool PartialConditioner::kron_path_fits() const {
  const Dims dims = system_.dims();
  const Index width = dims.s() + dims.l();
  const Index tall = std::max(selector_.rows(), dims.l());
  return tall * width <= kKronPathEntryLimit;
}

CnValue PartialConditioner::unified(const PerturbationWeights& weights, const XiChoice& xi,
                                    NormKind norm) const {
  const Vector scale = ddagger(xi.resolve(selected_solution_));
  const SparseMatrix cols = sensitivity_columns(system_.solution());
  const Vector w = weights.column_weights(system_.dims());
  if (norm == NormKind::Inf) {
    const Vector num = abs_weighted_row_sums(selected_inverse_, cols, w);
    return {scale.cwiseAbs().cwiseProduct(num).maxCoeff(), CnFlavor::UnifiedInf};
  }
  return {weighted_two_norm(selected_inverse_, cols, w, scale), CnFlavor::Unified2};
}

Matrix PartialConditioner::ncn_matrix(double psi, double chi) const {
  const Dims dims = system_.dims();
  Matrix wide(selector_.rows(), dims.s() + dims.l());
  wide.leftCols(dims.s()).noalias() = psi * (selected_inverse_ * build_g(system_.solution()));
  wide.rightCols(dims.l()) = -chi * selected_inverse_;
  return wide;
}

CnValue PartialConditioner::ncn(double psi, double chi, NcnPath path) const {
  if (!(psi > 0.0) || !(chi > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ncn: psi and chi must be positive");
  }
  const double xi = XiChoice::ncn().resolve(selected_solution_)[0];
  if (path == NcnPath::Kron && kron_path_fits()) {
    return {induced_norm(ncn_matrix(psi, chi), NormKind::Two) / xi, CnFlavor::Ncn};
  }
  Matrix middle = psi * psi * build_j(system_.solution());
  middle.diagonal().array() += chi * chi;
  Matrix gram = selected_inverse_ * middle * selected_inverse_.transpose();
  gram = 0.5 * (gram + gram.transpose()).eval();
  const double top = std::max(0.0, largest_symmetric_eigenvalue(gram));
  return {std::sqrt(top) / xi, CnFlavor::NcnKronFree};
}

CnValue PartialConditioner::ncn_upper(double psi, double chi) const {
  if (!(psi > 0.0) || !(chi > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ncn_upper: psi and chi must be positive");
  }
  const double xi = XiChoice::ncn().resolve(selected_solution_)[0];
  const double j_norm = std::max(0.0, largest_symmetric_eigenvalue(build_j(system_.solution())));
  const double y_norm = induced_norm(selected_inverse_, NormKind::Two);
  return {y_norm / xi * (psi * std::sqrt(j_norm) + chi), CnFlavor::NcnUpper};
}

Vector PartialConditioner::inf_numerator() const {
  const SparseMatrix cols = sensitivity_columns(system_.solution());
  const Vector w = PerturbationWeights::from_data(system_.blocks()).column_weights(system_.dims());
  return abs_weighted_row_sums(selected_inverse_, cols, w);
}

CnValue PartialConditioner::inf(InfFlavor flavor) const {
  const Vector num = inf_numerator();
  if (flavor == InfFlavor::Mixed) {
    const double xi = XiChoice::mcn().resolve(selected_solution_)[0];
    return {num.maxCoeff() / xi, CnFlavor::Mcn};
  }
  const Vector scale = ddagger(selected_solution_).cwiseAbs();
  return {scale.cwiseProduct(num).maxCoeff(), CnFlavor::Ccn};
}

InfBounds PartialConditioner::inf_upper() const {
  const DsppBlocks& h = system_.blocks();
  const Solution& sol = system_.solution();
  const auto [n, m, p] = h.dims();
  const Vector ax = sol.x().cwiseAbs();
  const Vector ay = sol.y().cwiseAbs();
  const Vector az = sol.z().cwiseAbs();

  // The D term is |D||y|: dD enters the first-order map as -dD y.
  Vector bound(n + m + p);
  bound.head(n) = h.A().cwiseAbs() * ax + h.B().cwiseAbs().transpose() * ay;
  bound.segment(n, m) = h.B().cwiseAbs() * ax + h.D().cwiseAbs() * ay +
                        h.C().cwiseAbs().transpose() * az;
  bound.tail(p) = h.C().cwiseAbs() * ay + h.E().cwiseAbs() * az;
  bound += h.rhs().cwiseAbs();

  const Vector num = selected_inverse_.cwiseAbs() * bound;
  const double xi = XiChoice::mcn().resolve(selected_solution_)[0];
  const Vector scale = ddagger(selected_solution_).cwiseAbs();
  return {{num.maxCoeff() / xi, CnFlavor::McnUpper},
          {scale.cwiseProduct(num).maxCoeff(), CnFlavor::CcnUpper}};
}

CnValue unified_cn(const DsppBlocks& blocks, const Selector& sel,
                   const PerturbationWeights& weights, const XiChoice& xi, NormKind norm) {
  return PartialConditioner(blocks, sel).unified(weights, xi, norm);
}

CnValue ncn(const DsppBlocks& blocks, const Selector& sel, double psi, double chi, NcnPath path) {
  return PartialConditioner(blocks, sel).ncn(psi, chi, path);
}

CnValue ncn_upper(const DsppBlocks& blocks, const Selector& sel, double psi, double chi) {
  return PartialConditioner(blocks, sel).ncn_upper(psi, chi);
}

CnValue inf_cn(const DsppBlocks& blocks, const Selector& sel, InfFlavor flavor) {
  return PartialConditioner(blocks, sel).inf(flavor);
}

InfBounds inf_cn_upper(const DsppBlocks& blocks, const Selector& sel) {
  return PartialConditioner(blocks, sel).inf_upper();
}

}  // namespace pcn
