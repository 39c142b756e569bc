#include "cohcat/catalysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cohcat/measures.hpp"
#include "cohcat/tolerance.hpp"

namespace cohcat {

namespace {

std::vector<std::string> copy_labels(const SystemLayout& system, std::size_t first,
                                     std::size_t last) {
  std::vector<std::string> out;
  for (std::size_t c = first; c <= last; ++c) {
    for (const auto& l : system.relabeled("#" + std::to_string(c)).labels()) out.push_back(l);
  }
  return out;
}

std::string free_label(const SystemLayout& layout, std::string label) {
  while (layout.contains(label)) label += "'";
  return label;
}

}  // namespace

// ---------------------------------------------------------------------------

RegisterState::RegisterState(SystemLayout system, std::string register_label,
                             std::vector<Block> blocks)
    : system_(std::move(system)), register_label_(std::move(register_label)),
      blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("RegisterState: no blocks");
  double total = 0.0;
  for (const auto& b : blocks_) {
    if (!b.op.layout().same_dims(system_)) {
      throw std::invalid_argument("RegisterState: block layout does not match system");
    }
    if (b.weight < 0.0) throw std::invalid_argument("RegisterState: negative weight");
    total += b.weight;
  }
  if (std::abs(total - 1.0) > tol::psd) {
    throw std::invalid_argument("RegisterState: weights do not sum to 1");
  }
}

SystemLayout RegisterState::layout() const {
  const std::string party = system_.factors().front().party;
  return system_.concat(SystemLayout::single(register_label_, blocks_.size(), party));
}

DensityOperator RegisterState::dense() const {
  const auto d = static_cast<Eigen::Index>(system_.total_dim());
  const auto n = static_cast<Eigen::Index>(blocks_.size());
  Matrix m = Matrix::Zero(d * n, d * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& b = blocks_[k];
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) m(i * n + k, j * n + k) = b.weight * b.op.matrix()(i, j);
    }
  }
  return DensityOperator::trusted(layout(), std::move(m));
}

RegisterState RegisterState::traced_out(const std::vector<std::string>& labels) const {
  std::vector<Block> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back({b.weight, b.op.traced_out(labels)});
  SystemLayout sys = out.front().op.layout();
  return RegisterState(std::move(sys), register_label_, std::move(out));
}

DensityOperator RegisterState::without_register() const {
  Matrix m = Matrix::Zero(system_.total_dim(), system_.total_dim());
  for (const auto& b : blocks_) m += b.weight * b.op.matrix();
  return DensityOperator::trusted(system_, std::move(m));
}

double trace_distance(const RegisterState& a, const RegisterState& b) {
  if (a.register_dim() != b.register_dim() || !a.system().same_dims(b.system())) {
    throw std::invalid_argument("trace_distance: register states have different shapes");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.register_dim(); ++k) {
    const Matrix diff = a.blocks()[k].weight * a.blocks()[k].op.matrix() -
                        b.blocks()[k].weight * b.blocks()[k].op.matrix();
    d += 0.5 * hermitian_eigenvalues(diff).cwiseAbs().sum();
  }
  return d;
}

double max_deviation(const RegisterState& a, const DensityOperator& dense) {
  return (a.dense().matrix() - dense.matrix()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

CatalystState build_catalyst(const DensityOperator& rho, const DensityOperator& gamma,
                             std::size_t copies) {
  if (copies < 2) throw std::invalid_argument("build_catalyst: need at least 2 copies");
  const SystemLayout& system = rho.layout();
  const SystemLayout full = system.copies(copies);
  if (!gamma.layout().same_dims(full)) {
    std::ostringstream msg;
    msg << "build_catalyst: Gamma has dimension " << gamma.dim() << ", expected "
        << copies << " copies of the system (" << full.total_dim() << ")";
    throw std::invalid_argument(msg.str());
  }
  DensityOperator g = relabel(gamma, full);
  const double asymmetry = permutation_asymmetry(g, copies);
  const bool twirl = asymmetry > tol::symmetry;
  if (twirl) g = symmetrize(g, copies);

  const SystemLayout catalyst_system = full.restricted_to(copy_labels(system, 2, copies));
  const std::string reg = free_label(full, "K");
  const double weight = 1.0 / static_cast<double>(copies);

  // Register ket k (0-based) carries rho^{k} on copies 2..k+1 and
  // Gamma_{n-1-k} on copies k+2..n.
  std::vector<RegisterState::Block> blocks;
  for (std::size_t k = 0; k < copies; ++k) {
    Matrix m = Matrix::Identity(1, 1);
    for (std::size_t c = 0; c < k; ++c) m = tensor_product(m, rho.matrix());
    if (k + 1 < copies) {
      m = tensor_product(m, g.reduced(copy_labels(system, k + 2, copies)).matrix());
    }
    blocks.push_back({weight, DensityOperator::trusted(catalyst_system, std::move(m))});
  }
  RegisterState ensemble(catalyst_system, reg, std::move(blocks));
  std::optional<DensityOperator> dense;
  if (ensemble.layout().total_dim() <= kDenseCatalystLimit) dense = ensemble.dense();
  return CatalystState{copies, system, rho, std::move(g), twirl, asymmetry,
                       std::move(ensemble), std::move(dense)};
}

// ---------------------------------------------------------------------------

ProtocolTrace run_protocol(const DensityOperator& rho, const DensityOperator& sigma,
                           const CatalystState& tau, const KrausChannel& lambda,
                           const ProtocolOptions& options) {
  const std::size_t n = tau.copies;
  const SystemLayout& system = tau.system;
  if (!rho.layout().same_dims(system) || !sigma.layout().same_dims(system)) {
    throw std::invalid_argument("run_protocol: input or target does not match the catalyst system");
  }
  const SystemLayout full = system.copies(n);
  if (!lambda.input_layout().same_dims(full) || !lambda.output_layout().same_dims(full)) {
    throw std::invalid_argument("run_protocol: lambda must map the n system copies to themselves");
  }
  const KrausChannel lam = lambda.with_layouts(full, full);
  const auto first_copy = copy_labels(system, 1, 1);
  const DensityOperator rho1 = relabel(rho, full.restricted_to(first_copy));
  const DensityOperator sigma1 = relabel(sigma, full.restricted_to(first_copy));
  const std::string& reg = tau.ensemble.register_label();
  const auto& cat_blocks = tau.ensemble.blocks();

  // Step (i): outcome n applies lambda (and the twirl the catalyst needed).
  DensityOperator gamma = apply(lam, tensor_power(rho, n));
  gamma = relabel(gamma, full);
  if (tau.symmetrized) gamma = symmetrize(gamma, n);

  std::vector<RegisterState::Block> b1;
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 < n) {
      b1.push_back({cat_blocks[k].weight, tensor(rho1, cat_blocks[k].op)});
    } else {
      b1.push_back({cat_blocks[k].weight, gamma});
    }
  }
  RegisterState mu1(full, reg, std::move(b1));

  // Step (ii): |k> -> |k+1>, |n> -> |1>.
  std::vector<RegisterState::Block> b2(mu1.blocks().begin(), mu1.blocks().end());
  std::rotate(b2.rbegin(), b2.rbegin() + 1, b2.rend());
  RegisterState mu2(full, reg, std::move(b2));

  // Step (iii): copy i moves to copy i+1, copy n to copy 1.
  std::vector<std::size_t> cyclic(n);
  for (std::size_t b = 0; b < n; ++b) cyclic[b] = (b + 1) % n;
  const auto perm = block_permutation(full, n, system.size(), cyclic);
  const auto dims = full.dims();
  std::vector<RegisterState::Block> b3;
  for (const auto& b : mu2.blocks()) {
    b3.push_back({b.weight, DensityOperator::trusted(full, permute_factors(b.op.matrix(), dims, perm))});
  }
  RegisterState mu_sc(full, reg, std::move(b3));

  RegisterState catalyst_marginal = mu_sc.traced_out(first_copy);
  DensityOperator output = relabel(mu_sc.without_register().reduced(first_copy), system);

  std::vector<RegisterState::Block> target_blocks;
  for (const auto& b : cat_blocks) target_blocks.push_back({b.weight, tensor(sigma1, b.op)});
  const RegisterState target(full, reg, std::move(target_blocks));

  ProtocolDistances dist;
  dist.gamma_to_target = trace_distance(gamma, relabel(tensor_power(sigma, n), full));
  dist.joint_to_target = trace_distance(mu_sc, target);
  dist.catalyst_return = trace_distance(catalyst_marginal, tau.ensemble);
  dist.output_to_target = trace_distance(output, sigma);

  ProtocolCertification cert;
  cert.lambda_incoherent = is_incoherent_operation(lambda);
  cert.register_shift_incoherent = is_incoherent_operation(register_shift(n, reg));
  // The swap is a permutation unitary by construction; build it explicitly
  // only while it stays small.
  cert.swap_incoherent =
      full.total_dim() > 1024 || is_incoherent_operation(permutation_channel(full, perm));
  cert.step1_trace_error = trace_preservation_error(lam);
  cert.twirled = tau.symmetrized;

  const std::size_t joint_dim = full.total_dim() * n;
  const bool run_dense =
      tau.dense.has_value() && lam.has_kraus() &&
      (options.dense == DensePath::always ||
       (options.dense == DensePath::automatic && joint_dim <= options.dense_limit));

  std::optional<DenseCrossCheck> dense;
  if (run_dense) {
    const DensityOperator initial = tensor(rho1, *tau.dense);
    const KrausChannel controlled = controlled_on_register(lam, n, n - 1, reg);
    cert.step1_trace_error = trace_preservation_error(controlled.kraus());
    DensityOperator d1 = apply(controlled, initial);
    if (tau.symmetrized) {
      d1 = apply(controlled_on_register(symmetrization_channel(full, n), n, n - 1, reg), d1);
    }
    const DensityOperator d2 = apply(embed(register_shift(n, reg), d1.layout(), {reg}), d1);
    auto joint_perm = perm;
    joint_perm.push_back(perm.size());
    const DensityOperator d3 = apply(permutation_channel(d2.layout(), joint_perm), d2);
    const double dev = std::max({max_deviation(mu1, d1), max_deviation(mu2, d2),
                                 max_deviation(mu_sc, d3)});
    dense = DenseCrossCheck{d1, d2, d3, dev};
  }

  return ProtocolTrace{std::move(mu1), std::move(mu2), std::move(mu_sc), std::move(gamma),
                       std::move(output), std::move(catalyst_marginal), dist, cert,
                       std::move(dense)};
}

// ---------------------------------------------------------------------------

namespace {

void require_single_party(const PureState& psi, const char* what) {
  if (psi.layout().parties().size() != 1) {
    throw std::invalid_argument(std::string(what) + ": expected a single-party state");
  }
}

}  // namespace

bool catalytic_pure_feasible(const PureState& psi, const PureState& phi) {
  require_single_party(psi, "catalytic_pure_feasible");
  require_single_party(phi, "catalytic_pure_feasible");
  return dephased_entropy(psi) >= dephased_entropy(phi) - tol::equality;
}

const char* to_string(RateVerdict v) {
  switch (v) {
    case RateVerdict::possible: return "possible";
    case RateVerdict::impossible: return "impossible";
    case RateVerdict::boundary: return "boundary";
  }
  return "?";
}

RateVerdict asymptotic_rate_feasible(const PureState& psi, const PureState& phi, double rate) {
  const double target = dephased_entropy(phi);
  if (target <= tol::equality) {
    throw std::invalid_argument(
        "asymptotic_rate_feasible: target is incoherent, the achievable rate is unbounded");
  }
  const double ratio = dephased_entropy(psi) / target;
  if (rate < ratio - tol::equality) return RateVerdict::possible;
  if (rate > ratio + tol::equality) return RateVerdict::impossible;
  return RateVerdict::boundary;
}

}  // namespace cohcat
