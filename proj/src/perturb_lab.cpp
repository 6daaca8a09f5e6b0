#include "pcn/perturb_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pcn/rng.hpp"

namespace pcn {

namespace {

Matrix tridiag(Index rows, Index cols, double sub, double diag, double super) {
  Matrix t = Matrix::Zero(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (i - 1 >= 0 && i - 1 < cols) t(i, i - 1) = sub;
    if (i < cols) t(i, i) = diag;
    if (i + 1 < cols) t(i, i + 1) = super;
  }
  return t;
}

Matrix block_diag(std::initializer_list<const Matrix*> parts) {
  Index rows = 0, cols = 0;
  for (const Matrix* p : parts) {
    rows += p->rows();
    cols += p->cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Index r = 0, c = 0;
  for (const Matrix* p : parts) {
    out.block(r, c, p->rows(), p->cols()) = *p;
    r += p->rows();
    c += p->cols();
  }
  return out;
}

void require_q(Index q) {
  if (q < 2) throw Error(ErrorCode::InvalidArgument, "q must be >= 2");
}

}  // namespace

Matrix toeplitz_sym(const Vector& c) {
  const Index n = c.size();
  Matrix t(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) t(i, j) = c[std::abs(i - j)];
  return t;
}

DsppBlocks gen_example1(Index q, std::uint64_t seed) {
  require_q(q);
  const double h = 1.0 / static_cast<double>(q + 1);
  const Matrix I = Matrix::Identity(q, q);
  const Matrix J = tridiag(q, q, -1.0, 2.0, -1.0) * (h * h);
  const Matrix Z = tridiag(q, q, 0.0, 1.0, -1.0) * h;
  Matrix Y = Matrix::Zero(q, q);
  for (Index i = 0; i < q; ++i) Y(i, i) = static_cast<double>(i * q + 1);

  const Matrix K = kron(I, J) + kron(J, I);
  const Matrix A = block_diag({&K, &K});
  Matrix B(q * q, 2 * q * q);
  B << kron(I, Z), kron(Z, I);
  const Matrix C = kron(Y, Z);
  const Index m = q * q, p = q * q;

  NormalRng rng(derive_seed(seed, {static_cast<std::uint64_t>(q)}));
  Vector b = rng.normal_vector(A.rows() + m + p);
  return DsppBlocks(A, B, C, Matrix::Identity(m, m), Matrix::Identity(p, p), std::move(b));
}

GeneratedProblem gen_example2(Index q, std::uint64_t seed) {
  require_q(q);
  const Index qt = q * q;        // q~
  const Index qh = q * (q + 1);  // q^
  const double qd = static_cast<double>(q);

  Matrix Z(qh, qh);
  for (Index j = 0; j < qh; ++j)
    for (Index i = 0; i < qh; ++i) {
      const double a = static_cast<double>(i + 1) / 3.0;
      const double c = static_cast<double>(j + 1) / 3.0;
      Z(i, j) = std::exp(-2.0 * (a * a + c * c));
    }
  const Matrix top = 2.0 * Z * Z.transpose() + Matrix::Identity(qh, qh);
  Matrix sigma2 = Matrix::Zero(2 * qt, 2 * qt);
  Matrix sigma3 = Matrix::Zero(2 * qt, 2 * qt);
  for (Index j = 1; j <= 2 * qt; ++j) {
    const double over = static_cast<double>(j - qt);
    sigma2(j - 1, j - 1) = j <= qt ? 1.0 : 1e-5 * over * over;
    const double shifted = static_cast<double>(j + qt);
    sigma3(j - 1, j - 1) = 1e-5 * shifted * shifted;
  }
  const Matrix A = block_diag({&top, &sigma2, &sigma3});

  const Matrix Iq = Matrix::Identity(q, q);
  const Matrix n_hat = tridiag(q, q + 1, 0.0, 2.0, -1.0);
  Matrix N(2 * qt, qh);
  N << kron(n_hat, Iq), kron(Iq, n_hat);
  Matrix B(2 * qt, qh + 4 * qt);
  B << N, -Matrix::Identity(2 * qt, 2 * qt), Matrix::Identity(2 * qt, 2 * qt);

  Matrix m_hat = Matrix::Zero(q + 1, q);
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j) {
      const Index k = std::abs(i - j);
      m_hat(i, j) = k == 0 ? static_cast<double>((i + 1) * q + 1)
                           : (k % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(q - k) / qd;
    }
  m_hat(q, q - 1) = 1.0;
  Matrix C(qh, 2 * qt);
  C << kron(m_hat, Iq), kron(Iq, m_hat);

  const Index n = A.rows(), m = 2 * qt, p = qh;
  NormalRng rng(derive_seed(seed, {static_cast<std::uint64_t>(q)}));
  const Vector d = rng.normal_vector(m);
  const Vector e = rng.normal_vector(p);
  Vector b = rng.normal_vector(n + m + p);

  Dims dims{n, m, p};
  return {DsppBlocks(A, B, C, toeplitz_sym(d), toeplitz_sym(e), std::move(b)),
          StructureTriple::of(StructureKind::Symmetric, StructureKind::ToeplitzSym,
                              StructureKind::ToeplitzSym, dims)};
}

PerturbationSet PerturbationSet::scaled(double t) const {
  return {t * dA, t * dB, t * dC, t * dD, t * dE, t * db, s};
}

Vector PerturbationSet::parameter_vector() const {
  Vector out(dA.size() + dB.size() + dC.size() + dD.size() + dE.size() + db.size());
  out << vec(dA), vec(dB), vec(dC), vec(dD), vec(dE), db;
  return out;
}

PerturbationSet perturb(const DsppBlocks& blocks, int s, std::uint64_t seed) {
  if (s < 1) throw Error(ErrorCode::InvalidArgument, "perturbation exponent s must be >= 1");
  NormalRng rng(seed);
  const double scale = std::pow(10.0, -s);
  auto draw = [&](const Matrix& x) -> Matrix {
    return scale * rng.normal_matrix(x.rows(), x.cols()).cwiseProduct(x);
  };
  PerturbationSet out;
  out.dA = draw(blocks.A());
  out.dB = draw(blocks.B());
  out.dC = draw(blocks.C());
  out.dD = draw(blocks.D());
  out.dE = draw(blocks.E());
  out.db = scale * rng.normal_vector(blocks.rhs().size()).cwiseProduct(blocks.rhs());
  out.s = s;
  return out;
}

DsppBlocks apply(const DsppBlocks& blocks, const PerturbationSet& pert) {
  return DsppBlocks(blocks.A() + pert.dA, blocks.B() + pert.dB, blocks.C() + pert.dC,
                    blocks.D() + pert.dD, blocks.E() + pert.dE, blocks.rhs() + pert.db);
}

ForwardErrors forward_errors(const Vector& w, const Vector& w_perturbed, const Selector& sel) {
  if (w.size() != sel.L.cols() || w_perturbed.size() != w.size()) {
    throw Error(ErrorCode::DimensionMismatch, "forward_errors: shape mismatch");
  }
  const Vector lw = sel.L * w;
  const Vector dlw = sel.L * w_perturbed - lw;
  if (lw.lpNorm<Eigen::Infinity>() == 0.0) throw Error(ErrorCode::ZeroXi, "L w is zero");
  ForwardErrors out;
  out.r_k = dlw.norm() / lw.norm();
  out.r_m = dlw.lpNorm<Eigen::Infinity>() / lw.lpNorm<Eigen::Infinity>();
  out.r_c = entrywise_divide(dlw, lw).lpNorm<Eigen::Infinity>();
  return out;
}

namespace {

// Max |dx| / |x| over the nonzero entries of x.
double max_ratio(const Matrix& dx, const Matrix& x, const char* what) {
  double out = 0.0;
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) {
      if (x(i, j) == 0.0) {
        if (dx(i, j) != 0.0) {
          throw Error(ErrorCode::IncompatibleZeroPattern,
                      std::string("perturbation of ") + what + " touches a zero entry");
        }
        continue;
      }
      out = std::max(out, std::abs(dx(i, j)) / std::abs(x(i, j)));
    }
  return out;
}

}  // namespace

Epsilons epsilons(const PerturbationSet& pert, const DsppBlocks& blocks) {
  const Dims dims = blocks.dims();
  if (pert.dA.rows() != dims.n || pert.dB.rows() != dims.m || pert.dC.rows() != dims.p ||
      pert.db.size() != dims.l()) {
    throw Error(ErrorCode::DimensionMismatch, "perturbation does not match the blocks");
  }
  const DsppBlocks delta(pert.dA, pert.dB, pert.dC, pert.dD, pert.dE, pert.db);
  const double num = std::hypot(assemble(delta).norm(), pert.db.norm());
  const double den = std::hypot(assemble(blocks).norm(), blocks.rhs().norm());

  Epsilons out;
  out.eps1 = num / den;
  out.eps2 = std::max({max_ratio(pert.dA, blocks.A(), "A"), max_ratio(pert.dB, blocks.B(), "B"),
                       max_ratio(pert.dC, blocks.C(), "C"), max_ratio(pert.dD, blocks.D(), "D"),
                       max_ratio(pert.dE, blocks.E(), "E"),
                       max_ratio(pert.db, blocks.rhs(), "b")});
  return out;
}

double FirstOrderCheck::empirical_order() const {
  double order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    order = std::min(order, std::log2(residuals[i - 1] / residuals[i]));
  }
  return order;
}

FirstOrderCheck first_order_residual(const DsppBlocks& blocks, const PerturbationSet& pert) {
  const DsppSystem system(blocks);
  const Vector& w = system.solution().w();
  const SparseMatrix cols = sensitivity_columns(system.solution());

  FirstOrderCheck out;
  for (double t : {1.0, 0.5, 0.25}) {
    const PerturbationSet scaled = pert.scaled(t);
    const Vector actual = solve_dspp(apply(blocks, scaled)).w() - w;
    const Vector predicted = -system.lu().solve(Vector(cols * scaled.parameter_vector()));
    if (t == 1.0) {
      out.actual = actual;
      out.predicted = predicted;
    }
    out.residuals.push_back((actual - predicted).norm());
  }
  return out;
}

std::string_view to_string(Family family) {
  return family == Family::Example1 ? "example1" : "example2";
}

Family parse_family(std::string_view name) {
  if (name == "example1") return Family::Example1;
  if (name == "example2") return Family::Example2;
  throw Error(ErrorCode::InvalidArgument, "unknown problem family '" + std::string(name) + "'");
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  std::vector<ExperimentRow> rows;
  for (Index q : config.q_list) {
    std::optional<DsppBlocks> generated;
    std::optional<StructureTriple> structure;
    if (config.family == Family::Example1) {
      generated.emplace(gen_example1(q, config.seed));
    } else {
      GeneratedProblem gen = gen_example2(q, config.seed);
      generated.emplace(std::move(gen.blocks));
      structure.emplace(std::move(gen.structure));
    }
    const DsppBlocks& blocks = *generated;
    const DsppSystem system(blocks);
    const double psi = assemble(blocks).norm();
    const double chi = blocks.rhs().norm();

    for (std::size_t idx = 0; idx < config.selectors.size(); ++idx) {
      const Selector sel = make_selector(config.selectors[idx], blocks.dims());
      const PerturbationSet pert =
          perturb(blocks, config.s,
                  derive_seed(config.seed, {static_cast<std::uint64_t>(q), idx + 1}));
      const Solution perturbed = solve_dspp(apply(blocks, pert));

      const PartialConditioner cond(system, sel);
      ExperimentRow row;
      row.q = q;
      row.selector = sel.kind;
      row.errors = forward_errors(system.solution().w(), perturbed.w(), sel);
      row.eps = epsilons(pert, blocks);
      row.ncn = cond.ncn(psi, chi, NcnPath::KronFree).value;
      row.ncn_upper = cond.ncn_upper(psi, chi).value;
      row.mcn = cond.inf(InfFlavor::Mixed).value;
      row.ccn = cond.inf(InfFlavor::Componentwise).value;
      const InfBounds bounds = cond.inf_upper();
      row.mcn_upper = bounds.mcn_upper.value;
      row.ccn_upper = bounds.ccn_upper.value;
      if (config.structured) {
        if (!structure) {
          throw Error(ErrorCode::UnsupportedStructure,
                      "structured experiments are defined for example2 only");
        }
        StructuredValues sv;
        sv.ncn = structured_ncn(cond, PerturbationWeights::scalar(psi, chi), XiChoice::ncn(),
                                *structure)
                     .value;
        sv.mcn = structured_inf_cn(cond, InfFlavor::Mixed, *structure).value;
        sv.ccn = structured_inf_cn(cond, InfFlavor::Componentwise, *structure).value;
        row.structured = sv;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<std::string> dominance_violations(const ExperimentRow& row, int s) {
  std::vector<std::string> out;
  auto below = [&](double lhs, double rhs, double slack, const char* what) {
    if (!(lhs <= rhs * (1.0 + slack))) {
      out.push_back(std::string(what) + ": " + std::to_string(lhs) + " > " + std::to_string(rhs));
    }
  };
  const double values[] = {row.errors.r_k, row.errors.r_m, row.errors.r_c, row.eps.eps1,
                           row.eps.eps2,   row.ncn,        row.ncn_upper,  row.mcn,
                           row.mcn_upper,  row.ccn,        row.ccn_upper};
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      out.push_back("non-finite or negative entry");
      break;
    }
  }
  below(row.ncn, row.ncn_upper, 1e-12, "ncn <= ncn_upper");
  below(row.mcn, row.mcn_upper, 1e-12, "mcn <= mcn_upper");
  below(row.ccn, row.ccn_upper, 1e-12, "ccn <= ccn_upper");
  if (row.structured) {
    below(row.structured->ncn, row.ncn, 1e-12, "structured ncn <= ncn");
    below(row.structured->mcn, row.mcn, 1e-12, "structured mcn <= mcn");
    below(row.structured->ccn, row.ccn, 1e-12, "structured ccn <= ccn");
  }
  if (s >= 6) {
    below(row.errors.r_k, row.K2(), 1e-3, "r_k <= eps1 * ncn");
    below(row.errors.r_m, row.Km(), 1e-3, "r_m <= eps2 * mcn");
    below(row.errors.r_c, row.Kc(), 1e-3, "r_c <= eps2 * ccn");
  }
  return out;
}

}  // namespace pcn
