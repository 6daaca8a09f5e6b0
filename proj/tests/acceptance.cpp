// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. argv[1] is the path of the pcn executable.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pcn/eils.hpp"
#include "pcn/perturb_lab.hpp"
#include "pcn/structured_cn.hpp"
#include "support.hpp"

namespace {

using namespace pcn;
using testing::rel_diff;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const SelectorKind kSelectors[] = {SelectorKind::Full, SelectorKind::XPart, SelectorKind::YPart,
                                   SelectorKind::ZPart};

// Instance i of the random family: 2 <= n, m, p <= 8.
DsppBlocks random_instance(std::uint64_t i) {
  auto dim = [&](std::uint64_t tag) {
    return static_cast<Index>(2 + derive_seed(1000, {i, tag}) % 7);
  };
  return testing::random_blocks(dim(0), dim(1), dim(2), derive_seed(1000, {i, 3}));
}

Outcome formula_equivalence() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const DsppBlocks blocks = random_instance(i);
    const double psi = assemble(blocks).norm(), chi = blocks.rhs().norm();
    for (SelectorKind kind : kSelectors) {
      const PartialConditioner cond(blocks, make_selector(kind, blocks.dims()));
      const CnValue kron = cond.ncn(psi, chi, NcnPath::Kron);
      const CnValue gram = cond.ncn(psi, chi, NcnPath::KronFree);
      out.require(kron.flavor == CnFlavor::Ncn, "Kronecker path did not run");
      worst = std::max(worst, rel_diff(kron.value, gram.value));
    }
  }
  const double secs = seconds_since(t0);
  out.require(worst <= 1e-10, "max relative difference " + sci(worst));
  out.require(secs < 10.0, "runtime " + sci(secs) + " s");
  if (out.pass) out.detail = "max relative difference " + sci(worst) + ", " + sci(secs) + " s";
  return out;
}

Outcome dominance_suite() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<DsppBlocks> instances;
  for (std::uint64_t i = 0; i < 50; ++i) instances.push_back(random_instance(i));
  for (Index q : {4, 6, 8}) instances.push_back(gen_example1(q, 42));
  for (Index q : {2, 3}) instances.push_back(gen_example2(q, 42).blocks);

  int checks = 0;
  for (const DsppBlocks& blocks : instances) {
    const DsppSystem system(blocks);
    const double psi = assemble(blocks).norm(), chi = blocks.rhs().norm();
    for (SelectorKind kind : kSelectors) {
      const PartialConditioner cond(system, make_selector(kind, blocks.dims()));
      const double ncn = cond.ncn(psi, chi, NcnPath::Kron).value;
      const double ncn_u = cond.ncn_upper(psi, chi).value;
      const double mcn = cond.inf(InfFlavor::Mixed).value;
      const double ccn = cond.inf(InfFlavor::Componentwise).value;
      const InfBounds bounds = cond.inf_upper();
      const std::string where = "l=" + std::to_string(blocks.dims().l()) + " " +
                                std::string(to_string(kind)) + ": ";
      out.require(ncn <= ncn_u * (1 + 1e-12), where + "ncn " + sci(ncn) + " > " + sci(ncn_u));
      out.require(mcn <= bounds.mcn_upper.value * (1 + 1e-12), where + "mcn above its bound");
      out.require(ccn <= bounds.ccn_upper.value * (1 + 1e-12), where + "ccn above its bound");
      checks += 3;
    }
  }
  const double secs = seconds_since(t0);
  out.require(secs < 60.0, "runtime " + sci(secs) + " s");
  if (out.pass) out.detail = std::to_string(checks) + " inequalities, " + sci(secs) + " s";
  return out;
}

Outcome definition_consistency() {
  Outcome out;
  double best_gap = 0.0;
  for (std::uint64_t i = 0; i < 5; ++i) {
    const DsppBlocks blocks = testing::random_blocks(2 + i % 2, 2, 2 + i % 3, 500 + i);
    const Dims dims = blocks.dims();
    const DsppSystem system(blocks);
    const Selector sel = make_selector(kSelectors[i % 4], dims);
    const PartialConditioner cond(system, sel);
    const double psi = assemble(blocks).norm(), chi = blocks.rhs().norm();
    const double ncn = cond.ncn(psi, chi, NcnPath::Kron).value;
    const double mcn = cond.inf(InfFlavor::Mixed).value;
    const double ccn = cond.inf(InfFlavor::Componentwise).value;

    const Index total = ParameterLayout::of(dims).total;
    Vector scale = Vector::Constant(total, psi);
    scale.tail(dims.l()).setConstant(chi);
    Vector magnitude(total);
    magnitude << vec(blocks.A()), vec(blocks.B()), vec(blocks.C()), vec(blocks.D()), vec(blocks.E()),
        blocks.rhs();
    magnitude = magnitude.cwiseAbs();

    const Vector lw = sel.L * system.solution().w();
    auto response = [&](const Vector& v) { return Vector(sel.L * testing::linear_response(system, v)); };

    NormalRng rng(derive_seed(77, {i}));
    std::mt19937_64 engine(derive_seed(78, {i}));
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
      const Vector v = rng.normal_vector(total);
      const double r2 = response(v).norm() / lw.norm() / v.cwiseQuotient(scale).norm();
      out.require(r2 <= ncn * (1 + 1e-10), "2-norm sample " + sci(r2) + " > ncn " + sci(ncn));

      Vector r(total);
      for (Index j = 0; j < total; ++j) r[j] = unif(engine);
      const double size = r.cwiseAbs().maxCoeff();
      const Vector dw = response(r.cwiseProduct(magnitude));
      const double rm = dw.lpNorm<Eigen::Infinity>() / lw.lpNorm<Eigen::Infinity>() / size;
      const double rc = entrywise_divide(dw, lw).lpNorm<Eigen::Infinity>() / size;
      out.require(rm <= mcn * (1 + 1e-10), "inf-norm sample " + sci(rm) + " > mcn " + sci(mcn));
      out.require(rc <= ccn * (1 + 1e-10), "inf-norm sample " + sci(rc) + " > ccn " + sci(ccn));
    }

    // The top right singular vector of Y [psi G, -chi I] attains ncn.
    const SpectralTriple top = spectral_top(cond.ncn_matrix(psi, chi));
    const Vector v = top.v.cwiseProduct(scale);
    const double attained = response(v).norm() / lw.norm() / v.cwiseQuotient(scale).norm();
    const double gap = rel_diff(attained, ncn);
    best_gap = std::max(best_gap, gap);
    out.require(gap <= 1e-8, "SVD direction misses ncn by " + sci(gap));
  }
  if (out.pass) out.detail = "5 instances x 1000 samples, SVD direction gap " + sci(best_gap);
  return out;
}

Outcome first_order_expansion() {
  Outcome out;
  const DsppBlocks blocks = gen_example1(4, 42);
  // s = 3 keeps the second-order term above roundoff for the halving test.
  const FirstOrderCheck large = first_order_residual(blocks, perturb(blocks, 3, 7));
  const double order = large.empirical_order();
  out.require(order >= 1.9, "empirical order " + sci(order));
  const FirstOrderCheck small = first_order_residual(blocks, perturb(blocks, 8, 7));
  const double rel = (small.actual - small.predicted).norm() / small.actual.norm();
  out.require(rel <= 1e-5, "relative mismatch at s=8 " + sci(rel));
  if (out.pass) out.detail = "order " + sci(order) + ", relative mismatch at s=8 " + sci(rel);
  return out;
}

Outcome error_bound_reproduction() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig config;
  config.q_list = {4, 6, 8, 10, 12, 14, 16};
  config.s = 8;
  config.seed = 42;
  const std::vector<ExperimentRow> rows = run_experiment(config);
  double lo = 1e300, hi = 0.0;
  for (const ExperimentRow& row : rows) {
    const std::string q = "q=" + std::to_string(row.q) + ": ";
    out.require(row.errors.r_k <= row.K2(), q + "r_k above K2");
    out.require(row.errors.r_m <= row.Km(), q + "r_m above Km");
    out.require(row.errors.r_c <= row.Kc(), q + "r_c above Kc");
    for (double ratio : {row.Km() / row.errors.r_m, row.Kc() / row.errors.r_c}) {
      out.require(ratio >= 1.0 && ratio <= 1e3, q + "bound-to-error ratio " + sci(ratio));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  const double secs = seconds_since(t0);
  out.require(secs < 300.0, "runtime " + sci(secs) + " s");
  if (out.pass) out.detail = "ratios in [" + sci(lo) + ", " + sci(hi) + "], " + sci(secs) + " s";
  return out;
}

Outcome upper_bound_sharpness() {
  Outcome out;
  ExperimentConfig config;
  config.q_list = {4};
  config.seed = 42;
  const ExperimentRow row = run_experiment(config).front();
  const double k2 = row.K2U() / row.K2(), km = row.KmU() / row.Km(), kc = row.KcU() / row.Kc();
  out.require(k2 <= 3.0, "K2U/K2 " + sci(k2));
  out.require(km <= 1.5, "KmU/Km " + sci(km));
  out.require(kc <= 1.5, "KcU/Kc " + sci(kc));
  out.detail = "K2U/K2 " + sci(k2) + ", KmU/Km " + sci(km) + ", KcU/Kc " + sci(kc);
  return out;
}

Outcome structured_dominance() {
  Outcome out;
  ExperimentConfig config;
  config.family = Family::Example2;
  config.q_list = {2, 3, 4};
  config.seed = 42;
  config.selectors.assign(std::begin(kSelectors), std::end(kSelectors));
  config.structured = true;
  const std::vector<ExperimentRow> rows = run_experiment(config);
  int mcn_smaller = 0, ccn_smaller = 0;
  for (const ExperimentRow& row : rows) {
    const StructuredValues& s = *row.structured;
    const std::string where = "q=" + std::to_string(row.q) + " " + std::string(to_string(row.selector));
    out.require(s.ncn <= row.ncn, where + ": structured ncn above ncn");
    out.require(s.mcn <= row.mcn, where + ": structured mcn above mcn");
    out.require(s.ccn <= row.ccn, where + ": structured ccn above ccn");
    mcn_smaller += row.mcn >= 1.05 * s.mcn;
    ccn_smaller += row.ccn >= 1.05 * s.ccn;
  }
  const int half = static_cast<int>((rows.size() + 1) / 2);
  out.require(rows.size() == 12, "expected 12 rows");
  out.require(mcn_smaller >= half, "mcn smaller by 1.05 in " + std::to_string(mcn_smaller) + " rows");
  out.require(ccn_smaller >= half, "ccn smaller by 1.05 in " + std::to_string(ccn_smaller) + " rows");
  if (out.pass) {
    out.detail = "factor >= 1.05: mcn " + std::to_string(mcn_smaller) + "/12, ccn " +
                 std::to_string(ccn_smaller) + "/12";
  }
  return out;
}

Outcome structure_basis_algebra() {
  Outcome out;
  for (StructureKind kind : {StructureKind::Symmetric, StructureKind::ToeplitzSym,
                             StructureKind::Diagonal, StructureKind::Full}) {
    for (Index dim = 1; dim <= 64; ++dim) {
      const StructureBasis basis(kind, dim);
      const SparseMatrix phi = basis.phi();
      const Matrix gram = Matrix(phi.transpose() * phi);
      const Matrix expected = Matrix(basis.column_counts().asDiagonal());
      out.require(gram == expected, std::string(to_string(kind)) + " gram mismatch at " + std::to_string(dim));
      const Matrix dense = Matrix(phi);
      out.require((dense.array() != 0.0).rowwise().count().maxCoeff() <= 1,
                  std::string(to_string(kind)) + " row with two nonzeros");
    }
  }
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const DsppBlocks blocks = random_instance(i);
    const StructureTriple full = StructureTriple::uniform(StructureKind::Full, blocks.dims());
    const double psi = assemble(blocks).norm(), chi = blocks.rhs().norm();
    for (SelectorKind kind : kSelectors) {
      const PartialConditioner cond(blocks, make_selector(kind, blocks.dims()));
      worst = std::max(worst, rel_diff(structured_ncn(cond, PerturbationWeights::scalar(psi, chi),
                                                      XiChoice::ncn(), full).value,
                                       cond.ncn(psi, chi, NcnPath::Kron).value));
      for (InfFlavor f : {InfFlavor::Mixed, InfFlavor::Componentwise}) {
        worst = std::max(worst, rel_diff(structured_inf_cn(cond, f, full).value, cond.inf(f).value));
      }
    }
  }
  out.require(worst <= 1e-12, "full-structure mismatch " + sci(worst));
  if (out.pass) out.detail = "dims 1..64, full-structure mismatch " + sci(worst);
  return out;
}

Outcome eils_specialization() {
  Outcome out;
  double worst = 0.0, worst_residual = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    NormalRng rng(derive_seed(900, {i}));
    const Index m = 2 + static_cast<Index>(derive_seed(901, {i}) % 5);   // 2..6
    const Index p = 1 + static_cast<Index>(derive_seed(902, {i}) % std::min<Index>(3, m - 1));
    const Index n = m + static_cast<Index>(derive_seed(903, {i}) % (11 - m));  // m..10
    const Index n2 = static_cast<Index>(derive_seed(904, {i}) % 3);
    Matrix M = rng.normal_matrix(n, m);
    M.bottomRows(std::min(n2, n)) *= 0.1;
    const EilsProblem prob(M, rng.normal_matrix(p, m), n - std::min(n2, n), std::min(n2, n),
                           rng.normal_vector(n), rng.normal_vector(p));
    const EilsSolution sol = solve_eils(prob);
    worst_residual = std::max(worst_residual, (prob.C() * sol.y - prob.d()).norm());

    const DsppBlocks blocks = eils_reduce(prob);
    const Dims dims = blocks.dims();
    const Matrix psi_M = rng.normal_matrix(n, m).cwiseAbs();
    const Matrix psi_C = rng.normal_matrix(p, m).cwiseAbs();
    const Vector chi_b = rng.normal_vector(n).cwiseAbs(), chi_d = rng.normal_vector(p).cwiseAbs();
    Vector chi(dims.l());
    chi << chi_b, Vector::Zero(m), chi_d;
    const PerturbationWeights zeroed = PerturbationWeights::entrywise(
        Matrix::Zero(n, n), psi_M.transpose(), psi_C, Matrix::Zero(m, m), Matrix::Zero(p, p), chi);
    const EilsWeights ew = EilsWeights::entrywise(psi_M, psi_C, chi_b, chi_d);
    for (SelectorKind kind : {SelectorKind::Full, SelectorKind::YPart}) {
      const Selector sel = make_selector(kind, dims);
      for (NormKind norm : {NormKind::Two, NormKind::Inf}) {
        for (const XiChoice& xi : {XiChoice::ncn(), XiChoice::ccn()}) {
          worst = std::max(worst, rel_diff(eils_cn(prob, sel, ew, xi, norm).value,
                                           unified_cn(blocks, sel, zeroed, xi, norm).value));
        }
      }
    }
  }
  out.require(worst <= 1e-12, "eils_cn vs unified_cn " + sci(worst));
  out.require(worst_residual <= 1e-8, "||C y - d|| " + sci(worst_residual));
  if (out.pass) out.detail = "mismatch " + sci(worst) + ", ||C y - d|| " + sci(worst_residual);
  return out;
}

Outcome hand_oracle() {
  Outcome out;
  for (Index k : {1, 2, 3}) {
    const DsppBlocks blocks = testing::identity_system(k, k, k, Vector::Unit(3 * k, 0));
    const PartialConditioner cond(blocks, make_selector(SelectorKind::XPart, blocks.dims()));
    const InfBounds bounds = cond.inf_upper();
    const std::string where = "n=m=p=" + std::to_string(k) + ": ";
    for (const auto& [name, v] : {std::pair{"mcn", cond.inf(InfFlavor::Mixed).value},
                                  std::pair{"ccn", cond.inf(InfFlavor::Componentwise).value},
                                  std::pair{"mcn_upper", bounds.mcn_upper.value},
                                  std::pair{"ccn_upper", bounds.ccn_upper.value}}) {
      out.require(std::abs(v - 2.0) <= 1e-14, where + name + " = " + sci(v));
    }
  }
  if (out.pass) out.detail = "mcn = ccn = mcn_upper = ccn_upper = 2";
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& exe) {
  Outcome out;
  if (exe.empty()) {
    out.require(false, "no pcn executable given");
    return out;
  }
  const auto dir = std::filesystem::temp_directory_path() / "pcn_acceptance";
  std::filesystem::create_directories(dir);
  std::string runs[2];
  for (int i = 0; i < 2; ++i) {
    const auto file = dir / ("run" + std::to_string(i) + ".csv");
    const std::string cmd = "\"" + exe + "\" experiment example1 --q 4 --seed 42 --s 8 --out \"" +
                            file.string() + "\"";
    out.require(std::system(cmd.c_str()) == 0, "command failed: " + cmd);
    runs[i] = slurp(file);
  }
  std::filesystem::remove_all(dir);
  out.require(!runs[0].empty(), "empty CSV");
  out.require(runs[0] == runs[1], "outputs differ");
  if (out.pass) out.detail = std::to_string(runs[0].size()) + " identical bytes";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"formula equivalence", formula_equivalence},
      {"dominance suite", dominance_suite},
      {"definition consistency", definition_consistency},
      {"first-order expansion", first_order_expansion},
      {"error-bound reproduction", error_bound_reproduction},
      {"upper-bound sharpness", upper_bound_sharpness},
      {"structured dominance", structured_dominance},
      {"structure-basis algebra", structure_basis_algebra},
      {"EILS specialization", eils_specialization},
      {"hand-oracle values", hand_oracle},
      {"determinism", [&] { return determinism(exe); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
