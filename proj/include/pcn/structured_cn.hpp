#ifndef PCN_STRUCTURED_CN_HPP_
#define PCN_STRUCTURED_CN_HPP_

// Structured partial condition numbers: perturbations of A, D and E are
// restricted to the same linear structure as the blocks themselves.
//
// A structure on n x n matrices is described by a 0/1 basis Phi (n^2 x s)
// with vec(M) = Phi * g for a unique generator g. All shipped bases have at
// most one nonzero per row and orthogonal columns, Phi^T Phi = diag(u)^2,
// which is what the closed forms below rely on.
//
// Generator orderings:
//   symmetric     (0,0), (0,1), ..., (0,n-1), (1,1), (1,2), ..., (n-1,n-1)
//   toeplitz_sym  diagonal offsets 0, 1, ..., n-1
//   diagonal      (0,0), (1,1), ..., (n-1,n-1)
//   full          vec order (column major)

#include <string_view>
#include <vector>

#include "pcn/columns.hpp"
#include "pcn/partial_cn.hpp"

namespace pcn {

enum class StructureKind { Symmetric, ToeplitzSym, Diagonal, Full };

std::string_view to_string(StructureKind kind);
// Accepts "symmetric", "toeplitz", "toeplitz_sym", "diagonal", "full".
StructureKind parse_structure_kind(std::string_view name);

class StructureBasis {
 public:
  StructureBasis(StructureKind kind, Index dim);

  StructureKind kind() const { return kind_; }
  Index dim() const { return dim_; }
  Index generator_length() const { return generator_length_; }

  // u: Euclidean norms of the columns of Phi.
  const Vector& column_norms() const { return column_norms_; }
  // u^2 held exactly: the number of entries each generator owns.
  const Vector& column_counts() const { return column_counts_; }

  // Generator owning entry (row, col), or -1 if the structure pins it to zero.
  Index generator_of(Index row, Index col) const { return owner_[col * dim_ + row]; }

  SparseMatrix phi() const;
  Matrix reconstruct(const Vector& generator) const;

 private:
  StructureKind kind_;
  Index dim_;
  Index generator_length_ = 0;
  std::vector<Index> owner_;
  Vector column_counts_;
  Vector column_norms_;
};

StructureBasis structure_basis(StructureKind kind, Index dim);

// (Phi^T Phi)^{-1} Phi^T vec(M); throws NotInSubspace when M is not
// reproduced to 1e-12 * ||M||_inf.
Vector extract_generator(const Matrix& m, const StructureBasis& basis);

struct StructureTriple {
  StructureBasis A;
  StructureBasis D;
  StructureBasis E;

  static StructureTriple uniform(StructureKind kind, Dims dims);
  static StructureTriple of(StructureKind a, StructureKind d, StructureKind e, Dims dims);
};

// [G -I] * blockdiag(Phi_A, I, Phi_D, Phi_E, I): one column per structured parameter.
SparseMatrix structured_sensitivity_columns(const Solution& sol, const StructureTriple& triple);

// Structured unified CN. For the 2-norm the generator columns are scaled by
// u^{-1}; for the inf-norm they are not. Entrywise Psi_A, Psi_D, Psi_E must lie
// in their structure subspaces.
CnValue structured_unified_cn(const PartialConditioner& cond, const PerturbationWeights& weights,
                              const XiChoice& xi, NormKind norm, const StructureTriple& triple);

CnValue structured_ncn(const PartialConditioner& cond, const PerturbationWeights& weights,
                       const XiChoice& xi, const StructureTriple& triple);

// Psi = H, chi = b.
CnValue structured_inf_cn(const PartialConditioner& cond, InfFlavor flavor,
                          const StructureTriple& triple);

CnValue structured_ncn(const DsppBlocks& blocks, const Selector& sel,
                       const PerturbationWeights& weights, const XiChoice& xi,
                       const StructureTriple& triple);
CnValue structured_inf_cn(const DsppBlocks& blocks, const Selector& sel, InfFlavor flavor,
                          const StructureTriple& triple);

}  // namespace pcn

#endif  // PCN_STRUCTURED_CN_HPP_
