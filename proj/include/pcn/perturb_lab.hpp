#ifndef PCN_PERTURB_LAB_HPP_
#define PCN_PERTURB_LAB_HPP_

// Test problem generators, seeded entrywise perturbations, forward-error
// metrics and the experiment runner behind the `experiment` command.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcn/dspp.hpp"
#include "pcn/partial_cn.hpp"
#include "pcn/structured_cn.hpp"

namespace pcn {

// Saddle point problem on a q x q grid: n = 2q^2, m = p = q^2, b ~ N(0, I).
DsppBlocks gen_example1(Index q, std::uint64_t seed);

struct GeneratedProblem {
  DsppBlocks blocks;
  StructureTriple structure;
};

// Problem with symmetric A and symmetric Toeplitz D, E: n = 5q^2 + q,
// m = 2q^2, p = q^2 + q. Draw order: d, e, b.
GeneratedProblem gen_example2(Index q, std::uint64_t seed);

// Symmetric Toeplitz matrix with first column c.
Matrix toeplitz_sym(const Vector& c);

struct PerturbationSet {
  Matrix dA, dB, dC, dD, dE;
  Vector db;
  int s = 8;

  PerturbationSet scaled(double t) const;
  // [vec dA; vec dB; vec dC; vec dD; vec dE; db]
  Vector parameter_vector() const;
};

// dX = 10^-s * G (.) X with independent standard normals G, drawn in the order
// A, B, C, D, E, b (column major within each).
PerturbationSet perturb(const DsppBlocks& blocks, int s, std::uint64_t seed);

// Blocks (A + dA, ..., b + db).
DsppBlocks apply(const DsppBlocks& blocks, const PerturbationSet& pert);

struct ForwardErrors {
  double r_k = 0.0;  // ||L dw||_2 / ||L w||_2
  double r_m = 0.0;  // ||L dw||_inf / ||L w||_inf
  double r_c = 0.0;  // ||L dw ./ L w||_inf, zero entries of L w divide by 1
};

ForwardErrors forward_errors(const Vector& w, const Vector& w_perturbed, const Selector& sel);

struct Epsilons {
  double eps1 = 0.0;  // ||[dB db]||_F / ||[B b]||_F on the assembled matrix
  double eps2 = 0.0;  // smallest eps with |dB| <= eps |B|, |db| <= eps |b|
};

// Throws IncompatibleZeroPattern when a perturbation touches a zero entry.
Epsilons epsilons(const PerturbationSet& pert, const DsppBlocks& blocks);

struct FirstOrderCheck {
  Vector actual;     // w~ - w at t = 1
  Vector predicted;  // -inv(B) [G -I] [vec dH; db]
  // ||actual - predicted||_2 for the perturbation scaled by t = 1, 1/2, 1/4.
  std::vector<double> residuals;

  // log2 slope of the residual between successive halvings (minimum over the curve).
  double empirical_order() const;
};

FirstOrderCheck first_order_residual(const DsppBlocks& blocks, const PerturbationSet& pert);

enum class Family { Example1, Example2 };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

struct ExperimentConfig {
  Family family = Family::Example1;
  std::vector<Index> q_list;
  int s = 8;
  std::uint64_t seed = 0;
  std::vector<SelectorKind> selectors{SelectorKind::Full};
  bool structured = false;
};

struct StructuredValues {
  double ncn = 0.0;
  double mcn = 0.0;
  double ccn = 0.0;
};

struct ExperimentRow {
  Index q = 0;
  SelectorKind selector = SelectorKind::Full;
  ForwardErrors errors;
  Epsilons eps;
  // Raw CNs and bounds; ncn uses psi = ||B||_F, chi = ||b||_2.
  double ncn = 0.0, ncn_upper = 0.0;
  double mcn = 0.0, mcn_upper = 0.0;
  double ccn = 0.0, ccn_upper = 0.0;
  std::optional<StructuredValues> structured;

  // Error estimates: eps1 * ncn, eps2 * mcn, eps2 * ccn and their bounds.
  double K2() const { return eps.eps1 * ncn; }
  double K2U() const { return eps.eps1 * ncn_upper; }
  double Km() const { return eps.eps2 * mcn; }
  double KmU() const { return eps.eps2 * mcn_upper; }
  double Kc() const { return eps.eps2 * ccn; }
  double KcU() const { return eps.eps2 * ccn_upper; }
};

// Instance draws use derive_seed(seed, {q}); the perturbation for the row with
// selector index i uses derive_seed(seed, {q, i + 1}).
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

// Violated invariants of a row, empty when all hold: each CN below its bound
// (1e-12 relative slack), structured values below unstructured ones, and for
// s >= 6 each forward error below its estimate times 1 + 1e-3.
std::vector<std::string> dominance_violations(const ExperimentRow& row, int s);

}  // namespace pcn

#endif  // PCN_PERTURB_LAB_HPP_
