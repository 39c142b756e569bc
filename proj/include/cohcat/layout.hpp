#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cohcat {

/// One tensor factor. Its computational basis is the incoherent basis.
struct Factor {
  std::string label;
  std::size_t dim = 0;
  std::string party;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Ordered registry of tensor factors. The first factor is the most
/// significant digit of the joint basis index.
class SystemLayout {
 public:
  SystemLayout() = default;
  explicit SystemLayout(std::vector<Factor> factors);

  /// Single factor of dimension `dim`.
  static SystemLayout single(std::string label, std::size_t dim, std::string party = "");

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  std::size_t total_dim() const { return total_dim_; }
  std::vector<std::size_t> dims() const;

  /// Position of a factor; throws std::invalid_argument on unknown labels.
  std::size_t index_of(const std::string& label) const;
  std::vector<std::size_t> indices_of(const std::vector<std::string>& labels) const;
  bool contains(const std::string& label) const;

  std::vector<std::string> labels() const;
  /// Labels of all factors owned by `party`, in layout order.
  std::vector<std::string> party_labels(const std::string& party) const;
  /// Distinct parties in order of first appearance.
  std::vector<std::string> parties() const;
  /// Labels not in `labels`, in layout order.
  std::vector<std::string> complement(const std::vector<std::string>& labels) const;

  /// Sub-layout keeping the listed factors in layout order.
  SystemLayout restricted_to(const std::vector<std::string>& labels) const;

  /// Concatenation; labels must stay unique.
  SystemLayout concat(const SystemLayout& other) const;

  /// Same dims and parties with every label suffixed by `suffix`.
  SystemLayout relabeled(const std::string& suffix) const;

  /// `copies` concatenated copies; copy c (1-based) gets suffix "#c".
  SystemLayout copies(std::size_t count) const;

  bool same_dims(const SystemLayout& other) const;

  friend bool operator==(const SystemLayout&, const SystemLayout&) = default;

 private:
  std::vector<Factor> factors_;
  std::size_t total_dim_ = 1;
};

}  // namespace cohcat
