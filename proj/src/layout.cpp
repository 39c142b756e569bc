#include "cohcat/layout.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cohcat {

SystemLayout::SystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::set<std::string> seen;
  for (const auto& f : factors_) {
    if (f.dim == 0) throw std::invalid_argument("factor '" + f.label + "' has dimension 0");
    if (f.label.empty()) throw std::invalid_argument("factor labels must be non-empty");
    if (!seen.insert(f.label).second) {
      throw std::invalid_argument("duplicate factor label '" + f.label + "'");
    }
    total_dim_ *= f.dim;
  }
}

SystemLayout SystemLayout::single(std::string label, std::size_t dim, std::string party) {
  if (party.empty()) party = label;
  return SystemLayout({Factor{std::move(label), dim, std::move(party)}});
}

std::vector<std::size_t> SystemLayout::dims() const {
  std::vector<std::size_t> d;
  d.reserve(factors_.size());
  for (const auto& f : factors_) d.push_back(f.dim);
  return d;
}

std::size_t SystemLayout::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label == label) return i;
  }
  throw std::invalid_argument("unknown subsystem label '" + label + "'");
}

std::vector<std::size_t> SystemLayout::indices_of(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> idx;
  idx.reserve(labels.size());
  for (const auto& l : labels) {
    const auto i = index_of(l);
    if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
      throw std::invalid_argument("subsystem label '" + l + "' listed twice");
    }
    idx.push_back(i);
  }
  return idx;
}

bool SystemLayout::contains(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::vector<std::string> SystemLayout::labels() const {
  std::vector<std::string> out;
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

std::vector<std::string> SystemLayout::party_labels(const std::string& party) const {
  std::vector<std::string> out;
  for (const auto& f : factors_) {
    if (f.party == party) out.push_back(f.label);
  }
  if (out.empty()) throw std::invalid_argument("unknown party '" + party + "'");
  return out;
}

std::vector<std::string> SystemLayout::parties() const {
  std::vector<std::string> out;
  for (const auto& f : factors_) {
    if (std::find(out.begin(), out.end(), f.party) == out.end()) out.push_back(f.party);
  }
  return out;
}

std::vector<std::string> SystemLayout::complement(const std::vector<std::string>& labels) const {
  const auto idx = indices_of(labels);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) out.push_back(factors_[i].label);
  }
  return out;
}

SystemLayout SystemLayout::restricted_to(const std::vector<std::string>& labels) const {
  auto idx = indices_of(labels);
  std::sort(idx.begin(), idx.end());
  std::vector<Factor> kept;
  for (auto i : idx) kept.push_back(factors_[i]);
  return SystemLayout(std::move(kept));
}

SystemLayout SystemLayout::concat(const SystemLayout& other) const {
  auto f = factors_;
  f.insert(f.end(), other.factors_.begin(), other.factors_.end());
  return SystemLayout(std::move(f));
}

SystemLayout SystemLayout::relabeled(const std::string& suffix) const {
  auto f = factors_;
  for (auto& x : f) x.label += suffix;
  return SystemLayout(std::move(f));
}

SystemLayout SystemLayout::copies(std::size_t count) const {
  std::vector<Factor> f;
  for (std::size_t c = 1; c <= count; ++c) {
    for (auto x : factors_) {
      x.label += "#" + std::to_string(c);
      f.push_back(std::move(x));
    }
  }
  return SystemLayout(std::move(f));
}

bool SystemLayout::same_dims(const SystemLayout& other) const { return dims() == other.dims(); }

}  // namespace cohcat
