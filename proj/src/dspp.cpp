#include "pcn/dspp.hpp"

#include <string>

namespace pcn {
namespace {

void require_shape(const Matrix& m, Index rows, Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string("block ") + name + " is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
}

}  // namespace

DsppBlocks::DsppBlocks(Matrix a, Matrix b, Matrix c, Matrix d, Matrix e, Vector rhs)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      e_(std::move(e)),
      rhs_(std::move(rhs)),
      dims_{a_.rows(), b_.rows(), c_.rows()} {
  if (dims_.n == 0 || dims_.m == 0 || dims_.p == 0) {
    throw Error(ErrorCode::DimensionMismatch, "n, m and p must all be positive");
  }
  require_shape(a_, dims_.n, dims_.n, "A");
  require_shape(b_, dims_.m, dims_.n, "B");
  require_shape(c_, dims_.p, dims_.m, "C");
  require_shape(d_, dims_.m, dims_.m, "D");
  require_shape(e_, dims_.p, dims_.p, "E");
  if (rhs_.size() != dims_.l()) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side must have length n + m + p");
  }
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
  require_finite(d_, "D");
  require_finite(e_, "E");
  require_finite(rhs_, "b");
}

Matrix assemble(const DsppBlocks& blocks) {
  const auto [n, m, p] = blocks.dims();
  Matrix out = Matrix::Zero(n + m + p, n + m + p);
  out.block(0, 0, n, n) = blocks.A();
  out.block(0, n, n, m) = blocks.B().transpose();
  out.block(n, 0, m, n) = blocks.B();
  out.block(n, n, m, m) = -blocks.D();
  out.block(n, n + m, m, p) = blocks.C().transpose();
  out.block(n + m, n, p, m) = blocks.C();
  out.block(n + m, n + m, p, p) = blocks.E();
  return out;
}

Solution::Solution(Vector w, Dims dims) : w_(std::move(w)), dims_(dims) {
  if (w_.size() != dims_.l()) {
    throw Error(ErrorCode::DimensionMismatch, "solution length must be n + m + p");
  }
}

Solution solve_dspp(const DsppBlocks& blocks) {
  return DsppSystem(blocks).solution();
}

std::string_view to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::Full: return "full";
    case SelectorKind::XPart: return "x";
    case SelectorKind::YPart: return "y";
    case SelectorKind::ZPart: return "z";
    case SelectorKind::Custom: return "custom";
  }
  return "?";
}

SelectorKind parse_selector_kind(std::string_view name) {
  if (name == "full" || name == "w") return SelectorKind::Full;
  if (name == "x") return SelectorKind::XPart;
  if (name == "y") return SelectorKind::YPart;
  if (name == "z") return SelectorKind::ZPart;
  if (name == "custom") return SelectorKind::Custom;
  throw Error(ErrorCode::InvalidArgument, "unknown selector '" + std::string(name) + "'");
}

Selector make_selector(SelectorKind kind, Dims dims, const std::optional<Matrix>& custom_L) {
  const Index l = dims.l();
  if (custom_L.has_value() != (kind == SelectorKind::Custom)) {
    throw Error(ErrorCode::InvalidArgument, "a custom L is required exactly for the custom selector");
  }
  Selector sel{kind, Matrix()};
  switch (kind) {
    case SelectorKind::Full:
      sel.L = Matrix::Identity(l, l);
      break;
    case SelectorKind::XPart:
      sel.L = Matrix::Zero(dims.n, l);
      sel.L.leftCols(dims.n).setIdentity();
      break;
    case SelectorKind::YPart:
      sel.L = Matrix::Zero(dims.m, l);
      sel.L.middleCols(dims.n, dims.m).setIdentity();
      break;
    case SelectorKind::ZPart:
      sel.L = Matrix::Zero(dims.p, l);
      sel.L.rightCols(dims.p).setIdentity();
      break;
    case SelectorKind::Custom:
      if (custom_L->cols() != l || custom_L->rows() == 0 || custom_L->rows() > l) {
        throw Error(ErrorCode::DimensionMismatch, "custom L must be k x l with 1 <= k <= l");
      }
      require_finite(*custom_L, "L");
      sel.L = *custom_L;
      break;
  }
  return sel;
}

DsppSystem::DsppSystem(DsppBlocks blocks)
    : blocks_(std::move(blocks)),
      matrix_(assemble(blocks_)),
      lu_(matrix_),
      solution_(lu_.solve(blocks_.rhs()), blocks_.dims()) {}

Matrix DsppSystem::selected_inverse(const Selector& sel) const {
  if (sel.L.cols() != dims().l()) {
    throw Error(ErrorCode::DimensionMismatch, "selector has the wrong number of columns");
  }
  return lu_.solve_transposed(sel.L.transpose()).transpose();
}

}  // namespace pcn
