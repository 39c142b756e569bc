#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohcat/channels.hpp"
#include "cohcat/report.hpp"
#include "cohcat/states.hpp"

namespace cohcat {

/// State that is block diagonal in a classical register appended as the
/// last factor: sum_k weight_k * op_k (x) |k><k|. Register kets are 0-based.
class RegisterState {
 public:
  struct Block {
    double weight = 0.0;
    DensityOperator op;
  };

  RegisterState(SystemLayout system, std::string register_label, std::vector<Block> blocks);

  const SystemLayout& system() const { return system_; }
  const std::string& register_label() const { return register_label_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t register_dim() const { return blocks_.size(); }

  /// system (x) register.
  SystemLayout layout() const;
  DensityOperator dense() const;

  /// Traces out system factors blockwise; the register is kept.
  RegisterState traced_out(const std::vector<std::string>& labels) const;
  /// Discards the register: sum_k weight_k op_k.
  DensityOperator without_register() const;

 private:
  SystemLayout system_;
  std::string register_label_;
  std::vector<Block> blocks_;
};

/// Trace distance between two register-diagonal states, computed blockwise.
double trace_distance(const RegisterState& a, const RegisterState& b);

/// Largest elementwise difference between the dense forms.
double max_deviation(const RegisterState& a, const DensityOperator& dense);

/// Catalyst tau = (1/n) sum_{k=1}^{n} rho^{(k-1)} (x) Gamma_{n-k} (x) |k><k| on
/// copies 2..n of the system plus an n-level register. Gamma_i is the
/// reduction of Gamma onto its last i copies and Gamma_0 is the empty factor.
struct CatalystState {
  std::size_t copies = 0;
  SystemLayout system;
  DensityOperator rho;
  /// Gamma on system.copies(copies), after symmetrization if one was needed.
  DensityOperator gamma;
  bool symmetrized = false;
  /// Permutation asymmetry of the Gamma that was passed in.
  double input_asymmetry = 0.0;
  RegisterState ensemble;
  /// Dense form; absent above dense_limit.
  std::optional<DensityOperator> dense;

  std::size_t system_dim() const { return system.total_dim(); }
  std::size_t total_dim() const { return ensemble.layout().total_dim(); }
};

inline constexpr std::size_t kDenseCatalystLimit = 4096;

/// Builds the catalyst. A Gamma that is not permutation invariant (beyond
/// tol::symmetry) is replaced by its exact permutation twirl and the
/// catalyst records that it did.
CatalystState build_catalyst(const DensityOperator& rho, const DensityOperator& gamma,
                             std::size_t copies);

enum class DensePath { automatic, always, never };

struct ProtocolOptions {
  DensePath dense = DensePath::automatic;
  /// automatic runs the dense path up to this joint dimension.
  std::size_t dense_limit = 64;
};

struct ProtocolDistances {
  /// D(Gamma, sigma^n) for the Gamma produced by lambda.
  double gamma_to_target = 0.0;
  /// D(mu^SC, sigma (x) tau).
  double joint_to_target = 0.0;
  /// D(Tr_out mu^SC, tau).
  double catalyst_return = 0.0;
  /// D(Tr_catalyst mu^SC, sigma).
  double output_to_target = 0.0;
};

struct ProtocolCertification {
  bool lambda_incoherent = false;
  bool register_shift_incoherent = false;
  bool swap_incoherent = false;
  /// Trace-preservation error of the controlled step (i) channel.
  double step1_trace_error = 0.0;
  /// Lambda's output was twirled because the catalyst was.
  bool twirled = false;
};

struct DenseCrossCheck {
  DensityOperator mu1;
  DensityOperator mu2;
  DensityOperator mu_sc;
  /// Largest elementwise difference to the ensemble path over all three.
  double max_deviation = 0.0;
};

struct ProtocolTrace {
  RegisterState mu1;
  RegisterState mu2;
  RegisterState mu_sc;
  /// Lambda(rho^n), twirled when the catalyst was.
  DensityOperator gamma;
  /// Marginal on the first system copy after the final swap.
  DensityOperator output;
  /// Marginal on copies 2..n plus register after the final swap.
  RegisterState catalyst_marginal;
  ProtocolDistances distances;
  ProtocolCertification certification;
  std::optional<DenseCrossCheck> dense;
};

/// Executes the three protocol steps on rho (x) tau: (i) apply lambda to the
/// n system copies when the register reads n; (ii) shift the register
/// |k> -> |k+1>, |n> -> |1>; (iii) cyclically move copy S_i to S_{i+1} and
/// S_n to S_1. Distances are measured against `sigma`.
ProtocolTrace run_protocol(const DensityOperator& rho, const DensityOperator& sigma,
                           const CatalystState& tau, const KrausChannel& lambda,
                           const ProtocolOptions& options = {});

/// S(Delta psi) >= S(Delta phi) - tol::equality for single-party pure states.
bool catalytic_pure_feasible(const PureState& psi, const PureState& phi);

enum class RateVerdict { possible, impossible, boundary };

const char* to_string(RateVerdict v);

/// Compares `rate` with S(Delta psi) / S(Delta phi). Throws if phi is
/// incoherent (the ratio is unbounded).
RateVerdict asymptotic_rate_feasible(const PureState& psi, const PureState& phi, double rate);

// ---------------------------------------------------------------------------
// Monotonicity harness

enum class TrialKind {
  /// Lambda certified incoherent on the n copies.
  incoherent,
  /// Bipartite system; Alice arbitrary, Bob certified incoherent.
  lqicc,
  /// Replacement to target^n for a pure pair that passes the pure-state test.
  exact_target,
};

const char* to_string(TrialKind k);

struct TrialInput {
  TrialKind kind = TrialKind::incoherent;
  DensityOperator rho;
  std::size_t copies = 2;
  KrausChannel lambda;
  /// lqicc: Bob's part of lambda, which must certify as incoherent.
  std::optional<KrausChannel> bob_part;
  /// lqicc: Bob's factors in the single-copy system layout.
  std::vector<std::string> party_b;
  /// exact_target: the pure target.
  std::optional<DensityOperator> target;
};

enum class Verdict { pass, violation, rejected };

const char* to_string(Verdict v);

struct TrialOutcome {
  Verdict verdict = Verdict::pass;
  std::string reason;
  double eps_in = 0.0;
  double dist_out = 0.0;
  double ratio = 0.0;
  double catalyst_return = 0.0;
  /// Relative entropy of coherence, or its quantum-incoherent version for lqicc.
  double cr_in = 0.0;
  double cr_out = 0.0;
  /// Coherence of formation; absent for lqicc.
  std::optional<double> cf_in;
  std::optional<double> cf_out;
};

/// Certifies, runs and checks one trial. Certification failures are
/// reported as Verdict::rejected before any monotonicity check.
TrialOutcome evaluate_trial(const TrialInput& input, const ProtocolOptions& options = {});

/// Deterministic trial for (seed, index); kinds cycle incoherent,
/// exact_target, lqicc.
TrialInput sample_trial(std::uint64_t seed, std::size_t index);

ExperimentReport monotonicity_harness(int trials, std::uint64_t seed);

/// Runs the protocol with an exact-target oracle lambda on random qubit-like
/// states of dimension d: Gamma = (1 - t) sigma^n + t omega with omega a
/// symmetrized random state and t chosen so that D(Gamma, sigma^n) = epsilon.
ExperimentReport catalysis_sweep(std::size_t d, std::size_t copies, int trials,
                                 std::uint64_t seed, double epsilon);

/// Gamma at distance exactly `epsilon` from sigma^n, permutation invariant.
DensityOperator perturbed_target(const DensityOperator& sigma, std::size_t copies,
                                 double epsilon, std::uint64_t seed);

/// 64-bit mix of (seed, stream) for per-trial generators.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cohcat
