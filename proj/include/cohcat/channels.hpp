#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohcat/layout.hpp"
#include "cohcat/linalg.hpp"
#include "cohcat/states.hpp"

namespace cohcat {

/// Completely positive trace-preserving map in Kraus form.
///
/// Replacement channels (rho -> fixed target) keep the target alongside
/// their Kraus family and apply through it. Their Kraus family has
/// dim_in * rank(target) members, so above kMaxReplacementEntries complex
/// entries it is not materialized and kraus() throws.
class KrausChannel {
 public:
  /// Throws std::invalid_argument unless every Kraus matrix is
  /// out_dim x in_dim and sum K^dagger K = I within tol::psd.
  KrausChannel(SystemLayout input, SystemLayout output, std::vector<Matrix> kraus);

  const SystemLayout& input_layout() const { return input_; }
  const SystemLayout& output_layout() const { return output_; }

  bool has_kraus() const { return !kraus_.empty(); }
  /// Throws std::logic_error for an unmaterialized replacement channel.
  const std::vector<Matrix>& kraus() const;

  /// Target of a replacement channel.
  const std::optional<Matrix>& constant_output() const { return constant_output_; }

  /// Same map on relabeled layouts of identical dimensions.
  KrausChannel with_layouts(SystemLayout input, SystemLayout output) const;

 private:
  friend KrausChannel replacement_channel(const SystemLayout&, const DensityOperator&);
  KrausChannel() = default;

  SystemLayout input_;
  SystemLayout output_;
  std::vector<Matrix> kraus_;
  std::optional<Matrix> constant_output_;
  bool constant_incoherent_ = false;

  friend bool is_incoherent_operation(const KrausChannel& ch);
};

inline constexpr std::size_t kMaxReplacementEntries = std::size_t{1} << 22;

/// max |sum K^dagger K - I|.
double trace_preservation_error(const std::vector<Matrix>& kraus);
/// Zero for unmaterialized replacement channels, which are trace preserving
/// by construction.
double trace_preservation_error(const KrausChannel& ch);

/// sum K rho K^dagger. The input layout must have the channel's input
/// dimensions; the result carries the channel's output layout.
DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho);

/// True iff each Kraus matrix has at most one entry above 1e-12 in every
/// column, i.e. maps basis kets to multiples of basis kets.
bool is_incoherent_operation(const KrausChannel& ch);

KrausChannel identity_channel(const SystemLayout& layout);
KrausChannel unitary_channel(const SystemLayout& layout, const Matrix& u);

/// Kraus operators |i><i| on the selected factors, identity elsewhere.
KrausChannel dephasing_channel(const SystemLayout& layout, const std::vector<std::string>& subsystems);

/// Classical stochastic map on the basis: |i> -> |j> with probability
/// transition(j, i). Columns of `transition` must sum to 1.
KrausChannel classical_channel(const SystemLayout& layout, const Eigen::MatrixXd& transition);

/// Moves the content of factor i to position perm[i]. Permuted factors must
/// have equal dimensions; the layout (labels) is unchanged.
KrausChannel permutation_channel(const SystemLayout& layout, const std::vector<std::size_t>& perm);

/// Factor permutation moving block b of `blocks` equal-size consecutive
/// blocks to block position block_perm[b]. Trailing factors past the blocks
/// stay in place.
std::vector<std::size_t> block_permutation(const SystemLayout& layout, std::size_t blocks,
                                           std::size_t factors_per_block,
                                           const std::vector<std::size_t>& block_perm);

/// Cyclic register relabeling |k> -> |k+1>, |dimK-1> -> |0> (0-based kets).
KrausChannel register_shift(std::size_t dim_k, const std::string& label = "K");

/// rho -> target for every rho, via measure-and-prepare. An incoherent
/// target is prepared from basis kets, which makes the channel certify as
/// incoherent; a coherent target is prepared from its eigenvectors and does
/// not. This stands in for an asymptotic protocol assumed to exist.
KrausChannel replacement_channel(const SystemLayout& input, const DensityOperator& target);

/// Haar-random unitary from the QR decomposition of a seeded Ginibre matrix.
Matrix random_unitary(std::size_t dim, std::uint64_t seed);

/// Random channel that certifies as incoherent: a seeded choice among phase
/// permutations, mixtures of phase permutations, classical stochastic maps
/// and partial dephasing followed by a phase permutation.
KrausChannel random_incoherent_channel(const SystemLayout& layout, std::uint64_t seed);

/// a (x) b acting on input(a) ++ input(b).
KrausChannel tensor(const KrausChannel& a, const KrausChannel& b);

/// second o first.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

/// Lifts a dimension-preserving channel acting on `subsystems` (in the
/// channel's factor order) to the full layout.
KrausChannel embed(const KrausChannel& ch, const SystemLayout& full,
                   const std::vector<std::string>& subsystems);

/// Applies `inner` when a register factor of dimension `register_dim`
/// (appended last) reads `outcome`, identity otherwise. Dense form of a
/// measure-and-condition step; the register stays diagonal.
KrausChannel controlled_on_register(const KrausChannel& inner, std::size_t register_dim,
                                    std::size_t outcome, const std::string& label = "K");

/// Uniform mixture of all `copies`! block permutation unitaries; the
/// Kraus form of symmetrize().
KrausChannel symmetrization_channel(const SystemLayout& layout, std::size_t copies);

/// Exact average over all `copies`! permutations of `copies` equal blocks.
DensityOperator symmetrize(const DensityOperator& rho, std::size_t copies);

/// max over block permutations of |P rho P^dagger - rho|.
double permutation_asymmetry(const DensityOperator& rho, std::size_t copies);

}  // namespace cohcat
