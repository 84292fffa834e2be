#include "otto/fock_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "otto/analytic_cycle.hpp"

namespace otto::fock {

namespace {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

constexpr Complex kI{0.0, 1.0};

// The pumped Hamiltonian only couples levels of equal parity, so every
// operator built here splits into an even and an odd block.
struct Parity {
  std::array<std::vector<Index>, 2> indices;

  explicit Parity(std::size_t dim) {
    for (std::size_t n = 0; n < dim; ++n) {
      indices[n % 2].push_back(static_cast<Index>(n));
    }
  }
};

MatrixXd number_diagonal(Frequency omega, std::size_t dim) {
  MatrixXd h = MatrixXd::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t n = 0; n < dim; ++n) {
    h(static_cast<Index>(n), static_cast<Index>(n)) = omega.value() * (static_cast<double>(n) + 0.5);
  }
  return h;
}

// a^dag^2 + a^2.
MatrixXd pump_operator(std::size_t dim) {
  MatrixXd k = MatrixXd::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t n = 0; n + 2 < dim; ++n) {
    const double v = std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    k(static_cast<Index>(n + 2), static_cast<Index>(n)) = v;
    k(static_cast<Index>(n), static_cast<Index>(n + 2)) = v;
  }
  return k;
}

// Eigenvalues of rho below this fraction of the largest one are at the
// rounding level of the eigensolver and are dropped before propagation.
constexpr double kEnsembleFloor = 1e-14;

// Hermitian tridiagonal matrix within one parity block; upper(i) = M(i, i+1).
struct Tridiagonal {
  VectorXd diag;
  Eigen::VectorXcd upper;
};

Tridiagonal number_block(Frequency omega, const std::vector<Index>& levels) {
  Tridiagonal t;
  t.diag.resize(static_cast<Index>(levels.size()));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    t.diag(static_cast<Index>(i)) = omega.value() * (static_cast<double>(levels[i]) + 0.5);
  }
  t.upper = Eigen::VectorXcd::Zero(std::max<Index>(0, t.diag.size() - 1));
  return t;
}

// a^dag^2 + a^2 restricted to levels n, n + 2, n + 4, ...
Tridiagonal pump_block(const std::vector<Index>& levels) {
  Tridiagonal t;
  t.diag = VectorXd::Zero(static_cast<Index>(levels.size()));
  t.upper.resize(std::max<Index>(0, t.diag.size() - 1));
  for (Index i = 0; i < t.upper.size(); ++i) {
    const auto n = static_cast<double>(levels[static_cast<std::size_t>(i)]);
    t.upper(i) = std::sqrt((n + 1.0) * (n + 2.0));
  }
  return t;
}

// y = (M - shift) x / scale.
void apply_scaled(const Tridiagonal& m, double shift, double scale, const MatrixXcd& x, MatrixXcd& y) {
  const Index n = x.rows();
  const double inv = 1.0 / scale;
  y.noalias() = ((m.diag.array() - shift) * inv).matrix().asDiagonal() * x;
  if (n > 1) {
    y.topRows(n - 1).noalias() += (inv * m.upper).asDiagonal() * x.bottomRows(n - 1);
    y.bottomRows(n - 1).noalias() += (inv * m.upper.conjugate()).asDiagonal() * x.topRows(n - 1);
  }
}

// exp(-i M) x by Chebyshev expansion over the Gershgorin interval of M.
MatrixXcd chebyshev_exp(const Tridiagonal& m, const MatrixXcd& x) {
  const Index n = m.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(m.upper(i - 1)) : 0.0) + (i + 1 < n ? std::abs(m.upper(i)) : 0.0);
    lo = std::min(lo, m.diag(i) - radius);
    hi = std::max(hi, m.diag(i) + radius);
  }
  const double shift = 0.5 * (hi + lo);
  const double scale = std::max(0.5 * (hi - lo), 1e-3);

  MatrixXcd prev = x;
  MatrixXcd curr(x.rows(), x.cols());
  MatrixXcd next(x.rows(), x.cols());
  apply_scaled(m, shift, scale, prev, curr);
  MatrixXcd sum = std::cyl_bessel_j(0.0, scale) * prev - 2.0 * kI * std::cyl_bessel_j(1.0, scale) * curr;
  Complex phase = -kI;
  for (int order = 2;; ++order) {
    const double coeff = std::cyl_bessel_j(static_cast<double>(order), scale);
    if (order > scale && std::abs(coeff) < 1e-18) break;
    apply_scaled(m, shift, scale, curr, next);
    next = 2.0 * next - prev;
    phase *= -kI;
    sum += (2.0 * coeff) * phase * next;
    std::swap(prev, curr);
    std::swap(curr, next);
  }
  return std::exp(-kI * shift) * sum;
}

bool off_blocks_vanish(const MatrixXcd& m, const Parity& parity) {
  return m(parity.indices[0], parity.indices[1]).cwiseAbs().maxCoeff() == 0.0 &&
         m(parity.indices[1], parity.indices[0]).cwiseAbs().maxCoeff() == 0.0;
}

VectorXd hermitian_eigenvalues(const MatrixXcd& m) {
  const std::size_t dim = static_cast<std::size_t>(m.rows());
  if (dim >= 4) {
    const Parity parity(dim);
    if (off_blocks_vanish(m, parity)) {
      VectorXd values(m.rows());
      Index offset = 0;
      for (const auto& idx : parity.indices) {
        const MatrixXcd block = m(idx, idx);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(block, Eigen::EigenvaluesOnly);
        values.segment(offset, block.rows()) = solver.eigenvalues();
        offset += block.rows();
      }
      std::sort(values.data(), values.data() + values.size());
      return values;
    }
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// sum lambda ln lambda over the spectrum of rho.
double negative_entropy(const FockState& state) {
  double sum = 0.0;
  for (double lambda : hermitian_eigenvalues(state.rho)) {
    if (lambda > std::numeric_limits<double>::min()) {
      sum += lambda * std::log(lambda);
    }
  }
  return sum;
}

// Re tr(a b).
double trace_product(const MatrixXcd& a, const MatrixXcd& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

void require_tail(const FockState& state, const char* what) {
  const double tail = tail_weight(state);
  if (!(tail <= kTailTolerance)) {
    std::ostringstream msg;
    msg << what << ": tail weight " << tail << " above " << kTailTolerance << " at cutoff " << state.dim();
    throw CutoffTooSmall(msg.str());
  }
}

struct GibbsResult {
  FockState state;
  VectorXd energies;
};

GibbsResult gibbs_with_spectrum(const FockOperator& ham, InverseTemperature beta) {
  if (!(beta.value() > 0.0)) {
    throw InvalidParameter("inverse temperature must be positive");
  }
  const MatrixXd h = ham.matrix.real();
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(h);
  const VectorXd& e = solver.eigenvalues();
  const MatrixXd& v = solver.eigenvectors();
  const Index n = e.size();

  VectorXd log_weight(n);
  for (Index k = 0; k < n; ++k) {
    // Ground level pinned at zero so beta = infinity gives the projector.
    log_weight(k) = k == 0 ? 0.0 : -beta.value() * (e(k) - e(0));
  }
  const VectorXd weight = log_weight.array().exp();
  const double z = weight.sum();

  GibbsResult out;
  out.energies = e;
  out.state.rho = (v * (weight / z).asDiagonal() * v.transpose()).cast<Complex>();
  if (std::isfinite(beta.value())) {
    const VectorXd log_p = log_weight.array() - std::log(z);
    out.state.log_rho = (v * log_p.asDiagonal() * v.transpose()).cast<Complex>();
  }
  require_tail(out.state, "gibbs_state");
  return out;
}

}  // namespace

FockOperator annihilation(std::size_t dim) {
  FockOperator a{MatrixXcd::Zero(static_cast<Index>(dim), static_cast<Index>(dim))};
  for (std::size_t n = 1; n < dim; ++n) {
    a.matrix(static_cast<Index>(n - 1), static_cast<Index>(n)) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

FockOperator build_hamiltonian(Frequency omega, double chi, std::size_t dim) {
  if (dim < 2) {
    throw InvalidParameter("Fock cutoff must be at least 2");
  }
  const MatrixXd h = number_diagonal(omega, dim) + chi * pump_operator(dim);
  return {h.cast<Complex>()};
}

Eigen::VectorXd spectrum(const FockOperator& op) { return hermitian_eigenvalues(op.matrix); }

FockState gibbs_state(const FockOperator& ham, InverseTemperature beta) {
  return gibbs_with_spectrum(ham, beta).state;
}

double tail_weight(const FockState& state) {
  const Index n = state.rho.rows();
  const Index levels = std::min<Index>(static_cast<Index>(kTailLevels), n);
  return state.rho.diagonal().real().tail(levels).cwiseAbs().sum();
}

double expectation(const FockState& state, const FockOperator& op) { return trace_product(state.rho, op.matrix); }

double purity(const FockState& state) { return trace_product(state.rho, state.rho); }

double von_neumann_entropy(const FockState& state) { return -negative_entropy(state); }

double relative_entropy(const FockState& rho, const FockState& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw InvalidParameter("relative_entropy: dimension mismatch");
  }
  double cross = 0.0;
  if (sigma.log_rho) {
    cross = trace_product(rho.rho, *sigma.log_rho);
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(sigma.rho);
    const VectorXd& lambda = solver.eigenvalues();
    const double floor = static_cast<double>(sigma.dim()) * std::numeric_limits<double>::epsilon() *
                         lambda.cwiseAbs().maxCoeff();
    if (!(lambda.minCoeff() > floor)) {
      throw InvalidParameter("relative_entropy: reference state is rank deficient");
    }
    const MatrixXcd log_sigma =
        solver.eigenvectors() * lambda.array().log().matrix().asDiagonal() * solver.eigenvectors().adjoint();
    cross = trace_product(rho.rho, log_sigma);
  }
  return negative_entropy(rho) - cross;
}

namespace {

// Hamiltonian pieces of one parity block.
struct BlockOperators {
  Tridiagonal h0;
  Tridiagonal k;
  Tridiagonal comm;
};

std::array<BlockOperators, 2> block_operators(Frequency omega, const Parity& parity) {
  std::array<BlockOperators, 2> ops;
  for (int p = 0; p < 2; ++p) {
    ops[p].h0 = number_block(omega, parity.indices[p]);
    ops[p].k = pump_block(parity.indices[p]);
    // [H0, K] has the sparsity of K with entries (E_m - E_n) K_mn.
    ops[p].comm = ops[p].k;
    for (Index i = 0; i + 1 < ops[p].comm.diag.size(); ++i) {
      ops[p].comm.upper(i) *= ops[p].h0.diag(i) - ops[p].h0.diag(i + 1);
    }
  }
  return ops;
}

// Weight of the ensemble in the top kTailLevels levels.
double ensemble_tail(const std::array<MatrixXcd, 2>& psi, const VectorXd& weights) {
  double tail = 0.0;
  for (int p = 0; p < 2; ++p) {
    const Index levels = std::min<Index>(kTailLevels / 2, psi[p].rows());
    tail += (psi[p].bottomRows(levels).cwiseAbs2() * weights).sum();
  }
  return tail;
}

}  // namespace

FockState propagate(const FockState& state, const RampSchedule& schedule, Frequency omega,
                    const PropagationConfig& config) {
  if (!(omega.value() > 0.0)) {
    throw InvalidParameter("omega must be positive");
  }
  if (!(config.step > 0.0)) {
    throw InvalidParameter("Fock propagation step must be positive");
  }
  if (config.max_dim != 0 && config.dim_increment == 0) {
    throw InvalidParameter("basis growth needs a positive increment");
  }
  if (schedule.tau.is_sudden()) {
    return state;
  }
  std::size_t dim = state.dim();
  const std::size_t max_dim = std::max(config.max_dim, dim);
  Parity parity(dim);

  // rho = sum_j p_j |psi_j><psi_j|; only the psi_j are evolved.
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(state.rho);
  std::vector<Index> kept;
  const double floor = kEnsembleFloor * solver.eigenvalues().maxCoeff();
  for (Index j = 0; j < solver.eigenvalues().size(); ++j) {
    if (solver.eigenvalues()(j) > floor) kept.push_back(j);
  }
  const VectorXd weights = solver.eigenvalues()(kept);
  std::array<MatrixXcd, 2> psi;
  for (int p = 0; p < 2; ++p) {
    psi[p] = solver.eigenvectors()(parity.indices[p], kept);
  }
  std::array<BlockOperators, 2> ops = block_operators(omega, parity);

  const double duration = schedule.tau.periods() * 2.0 * kPi / omega.value();
  const auto steps = std::max<std::size_t>(
      kMinStrokeSteps, static_cast<std::size_t>(std::ceil(schedule.tau.periods() / config.step - 1e-9)));
  const double h = duration / static_cast<double>(steps);
  constexpr double kNode = 0.28867513459481288225;        // sqrt(3)/6
  constexpr double kCommutator = 0.14433756729740644113;  // sqrt(3)/12

  for (std::size_t step = 0; step < steps; ++step) {
    while (ensemble_tail(psi, weights) > kGrowthThreshold) {
      if (dim + config.dim_increment > max_dim || config.max_dim == 0) {
        std::ostringstream msg;
        msg << "fock propagate: tail weight " << ensemble_tail(psi, weights) << " at cutoff " << dim
            << " and no room to grow";
        throw CutoffTooSmall(msg.str());
      }
      dim += config.dim_increment;
      parity = Parity(dim);
      for (int p = 0; p < 2; ++p) {
        const Index old_rows = psi[p].rows();
        psi[p].conservativeResize(static_cast<Index>(parity.indices[p].size()), Eigen::NoChange);
        psi[p].bottomRows(psi[p].rows() - old_rows).setZero();
      }
      ops = block_operators(omega, parity);
    }
    const double base = static_cast<double>(step);
    const double c1 = schedule.chi_at((base + 0.5 - kNode) / static_cast<double>(steps));
    const double c2 = schedule.chi_at((base + 0.5 + kNode) / static_cast<double>(steps));
    for (int p = 0; p < 2; ++p) {
      // M = h H(mid) - i (sqrt3/12) h^2 [H2, H1], [H2, H1] = (c1 - c2)[H0, K].
      Tridiagonal m;
      m.diag = h * (ops[p].h0.diag + 0.5 * (c1 + c2) * ops[p].k.diag);
      m.upper = (h * 0.5 * (c1 + c2)) * ops[p].k.upper - kI * (kCommutator * h * h * (c1 - c2)) * ops[p].comm.upper;
      psi[p] = chebyshev_exp(m, psi[p]);
    }
  }

  MatrixXcd full = MatrixXcd::Zero(static_cast<Index>(dim), static_cast<Index>(kept.size()));
  for (int p = 0; p < 2; ++p) {
    full(parity.indices[p], Eigen::all) = psi[p];
  }
  FockState out;
  out.rho = full * weights.cast<Complex>().asDiagonal() * full.adjoint();
  out.rho = (0.5 * (out.rho + out.rho.adjoint())).eval();
  require_tail(out, "fock propagate");
  return out;
}

namespace {

// Gibbs state at the smallest cutoff >= dim (in steps of config.dim_increment)
// that passes the tail check.
GibbsResult gibbs_from(Frequency omega, double chi, InverseTemperature beta, std::size_t dim,
                       const CycleConfig& config) {
  for (;; dim += config.dim_increment) {
    try {
      return gibbs_with_spectrum(build_hamiltonian(omega, chi, dim), beta);
    } catch (const CutoffTooSmall&) {
      if (dim + config.dim_increment > config.max_dim) throw;
    }
  }
}

// Embeds rho into a larger basis with the added levels empty.
FockState pad(const FockState& state, std::size_t dim) {
  if (dim == state.dim()) return state;
  FockState out;
  const auto n = static_cast<Index>(state.dim());
  out.rho = MatrixXcd::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  out.rho.topLeftCorner(n, n) = state.rho;
  return out;
}

StrokeRecord unitary_record(StrokeKind kind, StrokeDuration tau, double before, double after) {
  StrokeRecord rec;
  rec.kind = kind;
  rec.duration = tau;
  rec.energy_before = Energy(before);
  rec.energy_after = Energy(after);
  rec.work = Work(after - before);
  return rec;
}

StrokeRecord relaxation_record(StrokeKind kind, double before, double after) {
  StrokeRecord rec;
  rec.kind = kind;
  rec.energy_before = Energy(before);
  rec.energy_after = Energy(after);
  rec.heat = Heat(after - before);
  return rec;
}

}  // namespace

CycleResult run_cycle(const EngineParams& params, StrokeDuration tau, const CycleConfig& config) {
  validate(params);
  if (config.initial_dim < 2 || config.dim_increment == 0 || config.max_dim < config.initial_dim) {
    throw InvalidParameter("invalid Fock cutoff schedule");
  }
  const double chi = params.chi();
  const PropagationConfig growth{config.step, config.dim_increment, config.max_dim};

  // Each Gibbs state is rebuilt at the cutoff of the state it is compared with.
  const GibbsResult hot = gibbs_from(params.omega, 0.0, params.beta_h, config.initial_dim, config);
  const FockState& rho1 = hot.state;
  FockState rho2 =
      propagate(rho1, {RampDirection::kCompression, chi, tau, RampProfile::kLinear}, params.omega, growth);
  const GibbsResult cold = gibbs_from(params.omega, chi, params.beta_c, rho2.dim(), config);
  const FockState& rho3 = cold.state;
  rho2 = pad(rho2, rho3.dim());
  FockState rho4 =
      propagate(rho3, {RampDirection::kExpansion, chi, tau, RampProfile::kLinear}, params.omega, growth);
  const GibbsResult hot_wide = gibbs_from(params.omega, 0.0, params.beta_h, rho4.dim(), config);
  rho4 = pad(rho4, hot_wide.state.dim());

  const FockOperator bare1 = build_hamiltonian(params.omega, 0.0, rho1.dim());
  const FockOperator pumped2 = build_hamiltonian(params.omega, chi, rho2.dim());
  const FockOperator bare4 = build_hamiltonian(params.omega, 0.0, rho4.dim());
  const double e1 = expectation(rho1, bare1);
  const double e2 = expectation(rho2, pumped2);
  const double e3 = expectation(rho3, pumped2);
  const double e4 = expectation(rho4, bare4);
  const double bare_gap = hot.energies(1) - hot.energies(0);
  const double pumped_gap = cold.energies(1) - cold.energies(0);

  CycleResult result;
  result.dim = rho4.dim();
  CycleReport& report = result.report;
  report.eta_carnot = eta_carnot(params);
  report.eta_qs = eta_quasistatic(params);

  StrokeRecord& comp = report.strokes[0];
  comp = unitary_record(StrokeKind::kCompression, tau, e1, e2);
  comp.entropy_after = von_neumann_entropy(rho2);
  comp.q_star = e2 / (pumped_gap * e1 / bare_gap);
  comp.entropy_production = relative_entropy(rho2, rho3);

  StrokeRecord& cool = report.strokes[1];
  cool = relaxation_record(StrokeKind::kCooling, e2, e3);
  cool.entropy_after = von_neumann_entropy(rho3);

  StrokeRecord& exp = report.strokes[2];
  exp = unitary_record(StrokeKind::kExpansion, tau, e3, e4);
  exp.entropy_after = von_neumann_entropy(rho4);
  exp.q_star = e4 / (bare_gap * e3 / pumped_gap);
  exp.entropy_production = relative_entropy(rho4, hot_wide.state);

  StrokeRecord& heat = report.strokes[3];
  heat = relaxation_record(StrokeKind::kHeating, e4, e1);
  heat.entropy_after = von_neumann_entropy(rho1);

  report.w_net = comp.work + exp.work;
  report.q_abs = heat.heat;
  if (report.w_net.value() < 0.0 && report.q_abs.value() > 0.0) {
    report.efficiency = -report.w_net.value() / report.q_abs.value();
  }
  return result;
}

}  // namespace otto::fock
