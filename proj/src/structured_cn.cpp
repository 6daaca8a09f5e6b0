#include "pcn/structured_cn.hpp"

#include <cmath>
#include <string>

namespace pcn {

std::string_view to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::Symmetric: return "symmetric";
    case StructureKind::ToeplitzSym: return "toeplitz_sym";
    case StructureKind::Diagonal: return "diagonal";
    case StructureKind::Full: return "full";
  }
  return "?";
}

StructureKind parse_structure_kind(std::string_view name) {
  if (name == "symmetric") return StructureKind::Symmetric;
  if (name == "toeplitz" || name == "toeplitz_sym") return StructureKind::ToeplitzSym;
  if (name == "diagonal") return StructureKind::Diagonal;
  if (name == "full") return StructureKind::Full;
  throw Error(ErrorCode::UnsupportedStructure, "unsupported structure '" + std::string(name) + "'");
}

StructureBasis::StructureBasis(StructureKind kind, Index dim)
    : kind_(kind), dim_(dim), owner_(static_cast<std::size_t>(dim * dim), -1) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "structure dimension must be >= 1");
  auto own = [&](Index i, Index j, Index g) { owner_[j * dim_ + i] = g; };
  switch (kind) {
    case StructureKind::Symmetric: {
      Index g = 0;
      for (Index i = 0; i < dim; ++i)
        for (Index j = i; j < dim; ++j, ++g) {
          own(i, j, g);
          own(j, i, g);
        }
      generator_length_ = g;
      break;
    }
    case StructureKind::ToeplitzSym:
      for (Index j = 0; j < dim; ++j)
        for (Index i = 0; i < dim; ++i) own(i, j, std::abs(i - j));
      generator_length_ = dim;
      break;
    case StructureKind::Diagonal:
      for (Index i = 0; i < dim; ++i) own(i, i, i);
      generator_length_ = dim;
      break;
    case StructureKind::Full:
      for (Index pos = 0; pos < dim * dim; ++pos) owner_[pos] = pos;
      generator_length_ = dim * dim;
      break;
  }
  column_counts_ = Vector::Zero(generator_length_);
  for (Index g : owner_)
    if (g >= 0) column_counts_[g] += 1.0;
  column_norms_ = column_counts_.cwiseSqrt();
}

SparseMatrix StructureBasis::phi() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(owner_.size());
  for (std::size_t pos = 0; pos < owner_.size(); ++pos)
    if (owner_[pos] >= 0) t.emplace_back(static_cast<Index>(pos), owner_[pos], 1.0);
  SparseMatrix out(dim_ * dim_, generator_length_);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Matrix StructureBasis::reconstruct(const Vector& generator) const {
  if (generator.size() != generator_length_) {
    throw Error(ErrorCode::DimensionMismatch, "generator has the wrong length");
  }
  Matrix out = Matrix::Zero(dim_, dim_);
  for (Index j = 0; j < dim_; ++j)
    for (Index i = 0; i < dim_; ++i) {
      const Index g = generator_of(i, j);
      if (g >= 0) out(i, j) = generator[g];
    }
  return out;
}

StructureBasis structure_basis(StructureKind kind, Index dim) {
  return StructureBasis(kind, dim);
}

Vector extract_generator(const Matrix& m, const StructureBasis& basis) {
  if (m.rows() != basis.dim() || m.cols() != basis.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "extract_generator: matrix does not match the basis");
  }
  const Vector& counts = basis.column_counts();
  Vector g = Vector::Zero(basis.generator_length());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const Index owner = basis.generator_of(i, j);
      if (owner >= 0) g[owner] += m(i, j);
    }
  g = g.cwiseQuotient(counts);

  const double residual = (m - basis.reconstruct(g)).cwiseAbs().maxCoeff();
  if (residual > 1e-12 * induced_norm(m, NormKind::Inf)) {
    throw Error(ErrorCode::NotInSubspace, std::string("matrix is not ") +
                                              std::string(to_string(basis.kind())) +
                                              " (residual " + std::to_string(residual) + ")");
  }
  return g;
}

StructureTriple StructureTriple::uniform(StructureKind kind, Dims dims) {
  return of(kind, kind, kind, dims);
}

StructureTriple StructureTriple::of(StructureKind a, StructureKind d, StructureKind e, Dims dims) {
  return {StructureBasis(a, dims.n), StructureBasis(d, dims.m), StructureBasis(e, dims.p)};
}

namespace {

void require_triple_matches(const StructureTriple& triple, Dims dims) {
  if (triple.A.dim() != dims.n || triple.D.dim() != dims.m || triple.E.dim() != dims.p) {
    throw Error(ErrorCode::DimensionMismatch, "structure dimensions do not match the blocks");
  }
}

// Column offsets of the structured parameter vector [a; vec B; vec C; d; e; b].
struct StructuredLayout {
  Index a, b, c, d, e, rhs, total;

  StructuredLayout(const StructureTriple& t, Dims dims) {
    a = 0;
    b = a + t.A.generator_length();
    c = b + dims.m * dims.n;
    d = c + dims.p * dims.m;
    e = d + t.D.generator_length();
    rhs = e + t.E.generator_length();
    total = rhs + dims.l();
  }
};

// Generator weights for one structured block: scalar psi or the generator of Psi.
Vector generator_weights(const PerturbationWeights& w, const Matrix& psi_block,
                         const StructureBasis& basis) {
  if (w.mode == PerturbationWeights::Mode::Scalar) {
    return Vector::Constant(basis.generator_length(), w.psi);
  }
  return extract_generator(psi_block, basis);
}

Vector structured_weights(const PerturbationWeights& w, const StructureTriple& t, Dims dims,
                          bool scale_by_norms) {
  const StructuredLayout at(t, dims);
  const Vector plain = w.column_weights(dims);
  const ParameterLayout full = ParameterLayout::of(dims);

  Vector out(at.total);
  Vector wa = generator_weights(w, w.psi_A, t.A);
  Vector wd = generator_weights(w, w.psi_D, t.D);
  Vector we = generator_weights(w, w.psi_E, t.E);
  if (scale_by_norms) {
    wa = wa.cwiseQuotient(t.A.column_norms());
    wd = wd.cwiseQuotient(t.D.column_norms());
    we = we.cwiseQuotient(t.E.column_norms());
  }
  out.segment(at.a, wa.size()) = wa;
  out.segment(at.b, at.d - at.b) = plain.segment(full.b, full.d - full.b);
  out.segment(at.d, wd.size()) = wd;
  out.segment(at.e, we.size()) = we;
  out.tail(dims.l()) = plain.tail(dims.l());
  return out;
}

void require_blocks_structured(const DsppBlocks& blocks, const StructureTriple& triple) {
  extract_generator(blocks.A(), triple.A);
  extract_generator(blocks.D(), triple.D);
  extract_generator(blocks.E(), triple.E);
}

}  // namespace

SparseMatrix structured_sensitivity_columns(const Solution& sol, const StructureTriple& triple) {
  const Dims dims = sol.dims();
  require_triple_matches(triple, dims);
  const ParameterLayout full = ParameterLayout::of(dims);
  const StructuredLayout at(triple, dims);

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(full.total));
  auto add_basis = [&](const StructureBasis& basis, Index row0, Index col0) {
    for (Index j = 0; j < basis.dim(); ++j)
      for (Index i = 0; i < basis.dim(); ++i) {
        const Index g = basis.generator_of(i, j);
        if (g >= 0) t.emplace_back(row0 + j * basis.dim() + i, col0 + g, 1.0);
      }
  };
  add_basis(triple.A, full.a, at.a);
  for (Index k = 0; k < full.d - full.b; ++k) t.emplace_back(full.b + k, at.b + k, 1.0);
  add_basis(triple.D, full.d, at.d);
  add_basis(triple.E, full.e, at.e);
  for (Index k = 0; k < dims.l(); ++k) t.emplace_back(full.rhs + k, at.rhs + k, 1.0);

  SparseMatrix basis(full.total, at.total);
  basis.setFromTriplets(t.begin(), t.end());
  SparseMatrix out = sensitivity_columns(sol) * basis;
  out.prune(0.0);
  return out;
}

CnValue structured_unified_cn(const PartialConditioner& cond, const PerturbationWeights& weights,
                              const XiChoice& xi, NormKind norm, const StructureTriple& triple) {
  const DsppBlocks& blocks = cond.system().blocks();
  require_triple_matches(triple, blocks.dims());
  require_blocks_structured(blocks, triple);

  const SparseMatrix cols = structured_sensitivity_columns(cond.system().solution(), triple);
  const Vector scale = ddagger(xi.resolve(cond.selected_solution()));
  if (norm == NormKind::Two) {
    const Vector w = structured_weights(weights, triple, blocks.dims(), true);
    return {weighted_two_norm(cond.selected_inverse(), cols, w, scale), CnFlavor::StructuredNcn};
  }
  const Vector w = structured_weights(weights, triple, blocks.dims(), false);
  const Vector num = abs_weighted_row_sums(cond.selected_inverse(), cols, w);
  return {scale.cwiseAbs().cwiseProduct(num).maxCoeff(), CnFlavor::StructuredUnifiedInf};
}

CnValue structured_ncn(const PartialConditioner& cond, const PerturbationWeights& weights,
                       const XiChoice& xi, const StructureTriple& triple) {
  return structured_unified_cn(cond, weights, xi, NormKind::Two, triple);
}

CnValue structured_inf_cn(const PartialConditioner& cond, InfFlavor flavor,
                          const StructureTriple& triple) {
  const PerturbationWeights data = PerturbationWeights::from_data(cond.system().blocks());
  const XiChoice xi = flavor == InfFlavor::Mixed ? XiChoice::mcn() : XiChoice::ccn();
  CnValue out = structured_unified_cn(cond, data, xi, NormKind::Inf, triple);
  out.flavor = flavor == InfFlavor::Mixed ? CnFlavor::StructuredMcn : CnFlavor::StructuredCcn;
  return out;
}

CnValue structured_ncn(const DsppBlocks& blocks, const Selector& sel,
                       const PerturbationWeights& weights, const XiChoice& xi,
                       const StructureTriple& triple) {
  return structured_ncn(PartialConditioner(blocks, sel), weights, xi, triple);
}

CnValue structured_inf_cn(const DsppBlocks& blocks, const Selector& sel, InfFlavor flavor,
                          const StructureTriple& triple) {
  return structured_inf_cn(PartialConditioner(blocks, sel), flavor, triple);
}

}  // namespace pcn
