#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohcat/states.hpp"

namespace cohcat {

enum class Certification { exact, upper_bound };

const char* to_string(Certification c);

struct OptimizerDiagnostics {
  int restarts = 0;
  int sweeps = 0;
  long long evaluations = 0;
  int best_restart = -1;
};

/// A coherence quantity in bits.
struct MeasureResult {
  double value = 0.0;
  Certification certified = Certification::exact;
  OptimizerDiagnostics diagnostics;
};

/// Settings of the coherence-of-formation optimizer. Decompositions are
/// generated by m x r isometries (r = rank, m in [r, r^2]) acting on the
/// weighted eigenvectors, then refined by two-parameter Givens rotations
/// between pairs of ensemble members until a sweep gains less than
/// `tolerance`.
struct FormationOptions {
  int restarts = 32;
  int max_sweeps = 500;
  double tolerance = 1e-8;
  std::uint64_t seed = 0x5eed;
  /// Run the optimizer even where a closed form applies.
  bool force_optimizer = false;
};

/// S(Delta rho) - S(rho).
MeasureResult relative_entropy_of_coherence(const DensityOperator& rho);

/// Equal to the relative entropy of coherence.
MeasureResult distillable_coherence(const DensityOperator& rho);

/// Minimal average dephased entropy over pure-state decompositions.
/// Exact for incoherent, pure and single-qubit inputs; otherwise the best
/// value found by the optimizer, certified as an upper bound.
MeasureResult coherence_of_formation(const DensityOperator& rho, const FormationOptions& options = {});

/// Closed form h((1 + sqrt(1 - 4|rho_01|^2)) / 2) for a qubit.
double qubit_coherence_of_formation(const DensityOperator& rho);

/// Optimizer only, whatever the input.
MeasureResult optimize_coherence_of_formation(const DensityOperator& rho,
                                              const FormationOptions& options = {});

/// Equal to the coherence of formation.
MeasureResult coherence_cost(const DensityOperator& rho, const FormationOptions& options = {});

/// S(Delta^B rho) - S(rho) with Delta^B dephasing the `party_b` factors.
MeasureResult qi_relative_entropy(const DensityOperator& rho, const std::vector<std::string>& party_b);

/// S(Tr_{complement} psi) for the factors in `party_a`.
double entanglement_entropy(const PureState& psi, const std::vector<std::string>& party_a);
/// Rejects mixed input.
double entanglement_entropy(const DensityOperator& rho, const std::vector<std::string>& party_a);

/// Dephased entropy S(Delta psi) of a pure state.
double dephased_entropy(const PureState& psi);

/// Throws if rho is not pure within tol::equality.
void require_pure(const DensityOperator& rho, const char* what);

}  // namespace cohcat
