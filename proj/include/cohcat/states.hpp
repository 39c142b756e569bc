#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohcat/layout.hpp"
#include "cohcat/linalg.hpp"

namespace cohcat {

class PureState;

/// Positive unit-trace Hermitian matrix over a labeled tensor layout.
class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and positivity; throws
  /// std::invalid_argument with a diagnostic otherwise.
  DensityOperator(SystemLayout layout, Matrix matrix);

  /// Skips the eigenvalue check. For outputs of maps that provably
  /// produce states (CPTP application, partial trace, dephasing); the
  /// matrix is symmetrized and the trace is still checked.
  static DensityOperator trusted(SystemLayout layout, Matrix matrix);

  static DensityOperator from_pure(const PureState& psi);
  /// diag(p) on `layout`.
  static DensityOperator diagonal(SystemLayout layout, const std::vector<double>& p);

  const SystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return layout_.total_dim(); }

  double entropy() const;
  double purity() const;

  /// Partial trace onto `keep` (kept factors retain their layout order).
  DensityOperator reduced(const std::vector<std::string>& keep) const;
  /// Traces out `labels`.
  DensityOperator traced_out(const std::vector<std::string>& labels) const;

 private:
  struct Unchecked {};
  DensityOperator(Unchecked, SystemLayout layout, Matrix matrix);

  SystemLayout layout_;
  Matrix matrix_;
};

/// Unit vector over a labeled tensor layout.
class PureState {
 public:
  PureState(SystemLayout layout, Vector amplitudes);

  /// Basis ket |index> of the joint layout.
  static PureState basis(SystemLayout layout, std::size_t index);

  const SystemLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return layout_.total_dim(); }

  DensityOperator density() const { return DensityOperator::from_pure(*this); }

 private:
  SystemLayout layout_;
  Vector amplitudes_;
};

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
PureState tensor(const PureState& a, const PureState& b);
/// `count` copies on layout.copies(count).
DensityOperator tensor_power(const DensityOperator& a, std::size_t count);

double trace_distance(const DensityOperator& a, const DensityOperator& b);

/// Zeroes every matrix element that is off-diagonal in any selected
/// factor. All factors gives the full dephasing map; a party's factors gives
/// the partial dephasing on that party.
DensityOperator dephase(const DensityOperator& rho, const std::vector<std::string>& subsystems);
/// Full dephasing in the product incoherent basis.
DensityOperator dephase(const DensityOperator& rho);

/// (|0> + ... + |d-1>) / sqrt(d) on a single factor.
PureState maximally_coherent(std::size_t d, const std::string& label = "S");

/// All off-diagonal entries below tol::psd in magnitude.
bool is_incoherent(const DensityOperator& rho);

/// Fixed-point test D(dephase(rho, partyB), rho) < tol::equality.
bool is_quantum_incoherent(const DensityOperator& rho, const std::vector<std::string>& party_b);

/// Haar-random pure state; identical seeds give identical states.
PureState random_pure(const SystemLayout& layout, std::uint64_t seed);

/// G G^dagger / Tr(G G^dagger) with G a seeded complex Gaussian dim x rank.
DensityOperator random_density(const SystemLayout& layout, std::size_t rank, std::uint64_t seed);

/// Purification on layout (x) a reference factor of the same dimension.
/// Reference kets are paired with eigenvectors in descending eigenvalue
/// order, so a pure input gives psi (x) |0>.
PureState purify(const DensityOperator& rho, const std::string& reference_label = "ref");

/// Same matrix on a layout with identical dimensions.
DensityOperator relabel(const DensityOperator& rho, SystemLayout layout);
PureState relabel(const PureState& psi, SystemLayout layout);

/// Reorders the factors of a layout and state together: factor i moves to
/// position perm[i].
DensityOperator permute(const DensityOperator& rho, const std::vector<std::size_t>& perm);

}  // namespace cohcat
