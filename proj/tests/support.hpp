#ifndef PCN_TESTS_SUPPORT_HPP_
#define PCN_TESTS_SUPPORT_HPP_

#include <cmath>
#include <cstdint>

#include "pcn/columns.hpp"
#include "pcn/dspp.hpp"
#include "pcn/rng.hpp"

namespace pcn::testing {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Random dense blocks; the shifts keep the assembled matrix comfortably nonsingular.
inline DsppBlocks random_blocks(Index n, Index m, Index p, std::uint64_t seed) {
  NormalRng rng(seed);
  Matrix A = rng.normal_matrix(n, n);
  A = A * A.transpose() + Matrix::Identity(n, n);
  Matrix B = rng.normal_matrix(m, n);
  Matrix C = rng.normal_matrix(p, m);
  Matrix D = rng.normal_matrix(m, m);
  D = D * D.transpose() + Matrix::Identity(m, m);
  Matrix E = rng.normal_matrix(p, p);
  E = E * E.transpose() + Matrix::Identity(p, p);
  Vector b = rng.normal_vector(n + m + p);
  return DsppBlocks(A, B, C, D, E, b);
}

// A = I, B = 0, C = 0, D = -I, E = I: the assembled matrix is the identity.
inline DsppBlocks identity_system(Index n, Index m, Index p, const Vector& b) {
  return DsppBlocks(Matrix::Identity(n, n), Matrix::Zero(m, n), Matrix::Zero(p, m),
                    -Matrix::Identity(m, m), Matrix::Identity(p, p), b);
}

// Blocks (dA, ..., dE) unpacked from a parameter vector laid out as
// [vec dA; vec dB; vec dC; vec dD; vec dE; db].
inline DsppBlocks blocks_from_parameters(const Vector& v, Dims dims) {
  const auto [n, m, p] = dims;
  const ParameterLayout at = ParameterLayout::of(dims);
  return DsppBlocks(unvec(v.segment(at.a, n * n), n, n), unvec(v.segment(at.b, m * n), m, n),
                    unvec(v.segment(at.c, p * m), p, m), unvec(v.segment(at.d, m * m), m, m),
                    unvec(v.segment(at.e, p * p), p, p), v.tail(dims.l()));
}

// First-order change of w for the parameter perturbation v, computed from the
// assembled perturbation matrix: dw = inv(B) (db - dB w).
inline Vector linear_response(const DsppSystem& system, const Vector& v) {
  const DsppBlocks delta = blocks_from_parameters(v, system.dims());
  return system.lu().solve(Vector(delta.rhs() - assemble(delta) * system.solution().w()));
}

// [G -I] column by column, each from an assembled unit perturbation.
inline Matrix sensitivity_by_assembly(const DsppSystem& system) {
  const Dims dims = system.dims();
  const Index total = ParameterLayout::of(dims).total;
  Matrix out(dims.l(), total);
  for (Index j = 0; j < total; ++j) {
    const DsppBlocks delta = blocks_from_parameters(Vector::Unit(total, j), dims);
    out.col(j) = assemble(delta) * system.solution().w() - delta.rhs();
  }
  return out;
}

}  // namespace pcn::testing

#endif  // PCN_TESTS_SUPPORT_HPP_
