#ifndef PCN_PARTIAL_CN_HPP_
#define PCN_PARTIAL_CN_HPP_

// Partial condition numbers of L * w for the double saddle point system
// B w = b, where w = [x; y; z].
//
// With Y = L * inv(B) and G the l x s first-order sensitivity matrix of
// (A, B, C, D, E), the unified partial CN is
//
//   || diag(xi^dagger) * Y * [G  -I] * diag(vec(Psi), chi) ||
//
// in the induced 2-norm or inf-norm. Normwise (ncn), mixed (mcn) and
// componentwise (ccn) CNs are specializations of it:
//
//   ncn = || Y [psi G, -chi I] ||_2 / ||L w||_2        (scalar psi, chi)
//       = || Y (psi^2 J + chi^2 I) Y^T ||_2^{1/2} / ||L w||_2,   J = G G^T
//   mcn = || |Y [G -I]| [vec|H|; |b|] ||_inf / ||L w||_inf
//   ccn = || (|Y [G -I]| [vec|H|; |b|]) / (L w) ||_inf
//
// together with Kronecker-free upper bounds for each of them.

#include <string_view>

#include "pcn/dspp.hpp"

namespace pcn {

// Perturbation scaling parameters. A zero weight forbids perturbing that entry.
struct PerturbationWeights {
  enum class Mode { Scalar, Entrywise };

  Mode mode = Mode::Scalar;
  double psi = 1.0;
  double chi = 1.0;
  Matrix psi_A, psi_B, psi_C, psi_D, psi_E;
  Vector chi_b;

  static PerturbationWeights scalar(double psi, double chi);
  static PerturbationWeights entrywise(Matrix psi_A, Matrix psi_B, Matrix psi_C, Matrix psi_D,
                                       Matrix psi_E, Vector chi_b);
  // Psi = |H|, chi = |b|: the choice behind the mixed and componentwise CNs.
  static PerturbationWeights from_data(const DsppBlocks& blocks);

  // [vec(Psi_A); ...; vec(Psi_E); chi], length s + l.
  Vector column_weights(Dims dims) const;
};

// Normalization of the output perturbation.
struct XiChoice {
  enum class Kind { Ncn, Mcn, Ccn, Custom };

  Kind kind = Kind::Ncn;
  Vector custom;

  static XiChoice ncn() { return {Kind::Ncn, {}}; }
  static XiChoice mcn() { return {Kind::Mcn, {}}; }
  static XiChoice ccn() { return {Kind::Ccn, {}}; }
  static XiChoice with(Vector xi) { return {Kind::Custom, std::move(xi)}; }

  // The xi_L vector for a given L w. Throws ZeroXi when ncn/mcn would divide by zero.
  Vector resolve(const Vector& selected_solution) const;
};

enum class CnFlavor {
  Unified2,
  UnifiedInf,
  Ncn,
  NcnKronFree,
  NcnUpper,
  Mcn,
  Ccn,
  McnUpper,
  CcnUpper,
  StructuredNcn,
  StructuredUnifiedInf,
  StructuredMcn,
  StructuredCcn,
  Eils2,
  EilsInf,
};

std::string_view to_string(CnFlavor flavor);

struct CnValue {
  double value = 0.0;
  CnFlavor flavor = CnFlavor::Unified2;
};

enum class NcnPath { Kron, KronFree };
enum class InfFlavor { Mixed, Componentwise };

struct InfBounds {
  CnValue mcn_upper;
  CnValue ccn_upper;
};

// Dense l x s sensitivity matrix, assembled block by block from Kronecker
// products; column blocks are vec(dA), vec(dB), vec(dC), vec(dD), vec(dE).
Matrix build_g(const Solution& sol);

// J = G G^T in closed form (no Kronecker products).
Matrix build_j(const Solution& sol);

// The Kronecker-product matrix Y [psi G, -chi I] is only assembled when it and G
// hold at most this many entries; larger problems use the Gram form.
inline constexpr Index kKronPathEntryLimit = 2'000'000;

// One system and one selector, with L * inv(B) and L * w computed once.
class PartialConditioner {
 public:
  PartialConditioner(DsppSystem system, Selector selector);
  PartialConditioner(const DsppBlocks& blocks, Selector selector);

  const DsppSystem& system() const { return system_; }
  const Selector& selector() const { return selector_; }
  const Matrix& selected_inverse() const { return selected_inverse_; }
  const Vector& selected_solution() const { return selected_solution_; }

  CnValue unified(const PerturbationWeights& weights, const XiChoice& xi, NormKind norm) const;

  // Kron requests fall back to KronFree above kKronPathEntryLimit; the flavor
  // of the result records which formula ran.
  CnValue ncn(double psi, double chi, NcnPath path) const;
  CnValue ncn_upper(double psi, double chi) const;
  CnValue inf(InfFlavor flavor) const;
  InfBounds inf_upper() const;

  // The explicit k x (s + l) matrix Y [psi G, -chi I].
  Matrix ncn_matrix(double psi, double chi) const;

  // |Y [G -I]| [vec|H|; |b|], shared numerator of mcn and ccn.
  Vector inf_numerator() const;

 private:
  bool kron_path_fits() const;

  DsppSystem system_;
  Selector selector_;
  Matrix selected_inverse_;
  Vector selected_solution_;
};

CnValue unified_cn(const DsppBlocks& blocks, const Selector& sel,
                   const PerturbationWeights& weights, const XiChoice& xi, NormKind norm);
CnValue ncn(const DsppBlocks& blocks, const Selector& sel, double psi, double chi, NcnPath path);
CnValue ncn_upper(const DsppBlocks& blocks, const Selector& sel, double psi, double chi);
CnValue inf_cn(const DsppBlocks& blocks, const Selector& sel, InfFlavor flavor);
InfBounds inf_cn_upper(const DsppBlocks& blocks, const Selector& sel);

}  // namespace pcn

#endif  // PCN_PARTIAL_CN_HPP_
