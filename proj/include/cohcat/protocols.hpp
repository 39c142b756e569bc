#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cohcat/report.hpp"
#include "cohcat/states.hpp"

namespace cohcat {

/// S(Delta(psi^B)) with psi^B = Tr_A |psi><psi|: the assisted distillation
/// rate of a pure bipartite state, equal to its quantum-incoherent relative
/// entropy.
double assisted_distillation_rate(const PureState& psi, const std::vector<std::string>& party_b);
/// Rejects mixed input; mixed states only have collaboration_upper_bound.
double assisted_distillation_rate(const DensityOperator& rho, const std::vector<std::string>& party_b);

/// Quantum-incoherent relative entropy, an upper bound on the assisted
/// distillation rate of a mixed state.
double collaboration_upper_bound(const DensityOperator& rho, const std::vector<std::string>& party_b);

/// S(AB) - S(B) of the reduced state on party_a and party_b. Negative values
/// are the rate at which merging yields singlets.
double conditional_entropy(const PureState& psi, const std::vector<std::string>& party_a,
                           const std::vector<std::string>& party_b);

/// Rate quantities for merging A into B with referee R at zero coherence cost.
struct MergeAnalysis {
  /// S(Delta rho^AB) - S(Delta rho^B).
  double e0 = 0.0;
  /// S(I^R (x) Delta^AB [rho]) - S(I^RA (x) Delta^B [rho]); lower bound on E + C.
  double tradeoff_rhs = 0.0;
  /// S(A|B) of the undephased state.
  double conditional_entropy = 0.0;
  /// Intermediate entropies, keyed by name.
  std::map<std::string, double> chain;
};

MergeAnalysis iqsm_e0(const PureState& psi, const std::vector<std::string>& party_r,
                      const std::vector<std::string>& party_a,
                      const std::vector<std::string>& party_b);

/// Line-by-line evaluation of the bound R >= E0 for an entangled resource
/// chi shared by Alice (first factor of chi) and Bob (second factor).
struct MergeBoundReport {
  /// Entanglement entropy of chi.
  double resource = 0.0;
  /// C_r^{A~|B~}(chi).
  double resource_qi = 0.0;
  /// C_r^{RA|B}(psi) and S(Delta rho^B).
  double psi_qi = 0.0;
  double bob_dephased = 0.0;
  /// C_r^{RAA~|BB~}(psi (x) chi).
  double joint_qi = 0.0;
  /// C_r^{R|AB}(psi), Alice's factors relabeled as Bob's, and S(Delta rho^AB).
  double merged_qi = 0.0;
  double joint_dephased = 0.0;
  double e0 = 0.0;
  /// resource - e0.
  double margin = 0.0;

  bool resource_identity = false;  // resource == resource_qi
  bool pure_state_identity = false;  // psi_qi == bob_dephased
  bool additivity = false;  // joint_qi == psi_qi + resource_qi
  bool relabeling = false;  // merged_qi == joint_dephased
  /// margin >= -tol::equality. False means the resource is insufficient,
  /// which is a finding, not an error.
  bool sufficient = false;

  bool chain_consistent() const {
    return resource_identity && pure_state_identity && additivity && relabeling;
  }
};

/// Throws std::invalid_argument unless chi is sum_i sqrt(lambda_i)|ii> with
/// real nonnegative coefficients (within tol::equality).
void require_schmidt_form(const PureState& chi);

MergeBoundReport verify_merge_bound(const PureState& psi, const std::vector<std::string>& party_r,
                                    const std::vector<std::string>& party_a,
                                    const std::vector<std::string>& party_b, const PureState& chi);

/// sum_i sqrt(lambda_i)|ii> on factors (alice_label: dim, bob_label: dim).
PureState schmidt_state(const std::vector<double>& lambdas, std::size_t dim,
                        const std::string& alice_label = "At", const std::string& bob_label = "Bt");

/// Schmidt state whose entanglement entropy equals `entropy` (bits), from
/// the family (1 - t)|00> + t uniform in the coefficients, solved by bisection.
PureState schmidt_state_with_entropy(double entropy, std::size_t dim,
                                     const std::string& alice_label = "At",
                                     const std::string& bob_label = "Bt");

/// Random bipartite pure states with local dimension d: assisted rate versus
/// the quantum-incoherent upper bound.
ExperimentReport assisted_sweep(std::size_t d, int trials, std::uint64_t seed);
/// Same for a fixed pure state; party_b defaults to the last party.
ExperimentReport assisted_report(const DensityOperator& rho, const std::vector<std::string>& party_b);

/// Random tripartite pure states (R, A, B each of dimension d) with a
/// Schmidt resource matched to max(E0, 0).
ExperimentReport iqsm_sweep(std::size_t d, int trials, std::uint64_t seed);

}  // namespace cohcat
