#include "cohcat/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cohcat/tolerance.hpp"

namespace cohcat {

namespace {

void require_matches(const SystemLayout& layout, Eigen::Index rows, Eigen::Index cols) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  if (rows != d || cols != d) {
    std::ostringstream msg;
    msg << "layout dimension " << d << " does not match matrix " << rows << "x" << cols;
    throw std::invalid_argument(msg.str());
  }
}

Complex gaussian(std::mt19937_64& rng, std::normal_distribution<double>& normal) {
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace

DensityOperator::DensityOperator(SystemLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  require_matches(layout_, matrix_.rows(), matrix_.cols());
  require_state(matrix_, "DensityOperator");
}

DensityOperator::DensityOperator(Unchecked, SystemLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {}

DensityOperator DensityOperator::trusted(SystemLayout layout, Matrix matrix) {
  require_matches(layout, matrix.rows(), matrix.cols());
  Matrix h = hermitian_part(matrix);
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > tol::psd) {
    std::ostringstream msg;
    msg << "DensityOperator: trace " << tr << " differs from 1";
    throw std::invalid_argument(msg.str());
  }
  return DensityOperator(Unchecked{}, std::move(layout), std::move(h));
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  const Vector& v = psi.amplitudes();
  return trusted(psi.layout(), v * v.adjoint());
}

DensityOperator DensityOperator::diagonal(SystemLayout layout, const std::vector<double>& p) {
  if (p.size() != layout.total_dim()) {
    throw std::invalid_argument("diagonal: probability vector length does not match layout");
  }
  Matrix m = Matrix::Zero(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m(i, i) = p[i];
  return DensityOperator(std::move(layout), std::move(m));
}

double DensityOperator::entropy() const { return von_neumann_entropy(matrix_); }

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

DensityOperator DensityOperator::reduced(const std::vector<std::string>& keep) const {
  const auto idx = layout_.indices_of(keep);
  const auto dims = layout_.dims();
  return trusted(layout_.restricted_to(keep), partial_trace(matrix_, dims, idx));
}

DensityOperator DensityOperator::traced_out(const std::vector<std::string>& labels) const {
  return reduced(layout_.complement(labels));
}

PureState::PureState(SystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim()) {
    throw std::invalid_argument("PureState: amplitude count does not match layout");
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tol::psd) {
    std::ostringstream msg;
    msg << "PureState: amplitudes have norm " << norm;
    throw std::invalid_argument(msg.str());
  }
}

PureState PureState::basis(SystemLayout layout, std::size_t index) {
  if (index >= layout.total_dim()) throw std::invalid_argument("basis index out of range");
  Vector v = Vector::Zero(layout.total_dim());
  v(index) = 1.0;
  return PureState(std::move(layout), std::move(v));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::trusted(a.layout().concat(b.layout()),
                                  tensor_product(a.matrix(), b.matrix()));
}

PureState tensor(const PureState& a, const PureState& b) {
  Vector v = tensor_product(a.amplitudes(), b.amplitudes());
  v.normalize();
  return PureState(a.layout().concat(b.layout()), std::move(v));
}

DensityOperator tensor_power(const DensityOperator& a, std::size_t count) {
  if (count == 0) throw std::invalid_argument("tensor_power: count must be positive");
  Matrix m = a.matrix();
  for (std::size_t c = 1; c < count; ++c) m = tensor_product(m, a.matrix());
  return DensityOperator::trusted(a.layout().copies(count), std::move(m));
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (!a.layout().same_dims(b.layout())) {
    throw std::invalid_argument("trace_distance: layouts have different dimensions");
  }
  return trace_distance(a.matrix(), b.matrix());
}

DensityOperator dephase(const DensityOperator& rho, const std::vector<std::string>& subsystems) {
  const auto& layout = rho.layout();
  const auto idx = layout.indices_of(subsystems);
  const auto dims = layout.dims();
  const std::size_t total = layout.total_dim();

  // key[x]: digits of x restricted to the selected factors.
  std::vector<std::size_t> key(total, 0);
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t rem = x, k = 0, radix = 1;
    for (std::size_t f = dims.size(); f-- > 0;) {
      const std::size_t digit = rem % dims[f];
      rem /= dims[f];
      if (std::find(idx.begin(), idx.end(), f) != idx.end()) {
        k += digit * radix;
        radix *= dims[f];
      }
    }
    key[x] = k;
  }
  Matrix out = rho.matrix();
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (key[i] != key[j]) out(i, j) = 0.0;
    }
  }
  return DensityOperator::trusted(layout, std::move(out));
}

DensityOperator dephase(const DensityOperator& rho) {
  Matrix out = rho.matrix().diagonal().asDiagonal();
  return DensityOperator::trusted(rho.layout(), std::move(out));
}

PureState maximally_coherent(std::size_t d, const std::string& label) {
  if (d < 2) throw std::invalid_argument("maximally_coherent: dimension must be at least 2");
  Vector v = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  return PureState(SystemLayout::single(label, d), std::move(v));
}

bool is_incoherent(const DensityOperator& rho) {
  const Matrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && std::abs(m(i, j)) >= tol::psd) return false;
    }
  }
  return true;
}

bool is_quantum_incoherent(const DensityOperator& rho, const std::vector<std::string>& party_b) {
  return trace_distance(dephase(rho, party_b), rho) < tol::equality;
}

PureState random_pure(const SystemLayout& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(layout.total_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gaussian(rng, normal);
  v.normalize();
  return PureState(layout, std::move(v));
}

DensityOperator random_density(const SystemLayout& layout, std::size_t rank, std::uint64_t seed) {
  const std::size_t d = layout.total_dim();
  if (rank == 0 || rank > d) {
    std::ostringstream msg;
    msg << "random_density: rank " << rank << " outside [1, " << d << "]";
    throw std::invalid_argument(msg.str());
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix g(d, rank);
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = gaussian(rng, normal);
  }
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator::trusted(layout, std::move(m));
}

PureState purify(const DensityOperator& rho, const std::string& reference_label) {
  std::string label = reference_label;
  while (rho.layout().contains(label)) label += "'";
  const std::size_t d = rho.dim();
  const Spectrum s = hermitian_eig(rho.matrix());
  Vector v = Vector::Zero(d * d);
  for (std::size_t k = 0; k < d; ++k) {
    const double lambda = std::max(0.0, s.eigenvalues(k));
    if (lambda == 0.0) continue;
    Vector ref = Vector::Zero(d);
    ref(k) = 1.0;
    v += std::sqrt(lambda) * tensor_product(Vector(s.eigenvectors.col(k)), ref);
  }
  v.normalize();
  return PureState(rho.layout().concat(SystemLayout::single(label, d, label)), std::move(v));
}

DensityOperator relabel(const DensityOperator& rho, SystemLayout layout) {
  if (!rho.layout().same_dims(layout)) throw std::invalid_argument("relabel: dimensions differ");
  return DensityOperator::trusted(std::move(layout), rho.matrix());
}

PureState relabel(const PureState& psi, SystemLayout layout) {
  if (!psi.layout().same_dims(layout)) throw std::invalid_argument("relabel: dimensions differ");
  return PureState(std::move(layout), psi.amplitudes());
}

DensityOperator permute(const DensityOperator& rho, const std::vector<std::size_t>& perm) {
  const auto& f = rho.layout().factors();
  if (perm.size() != f.size()) throw std::invalid_argument("permute: wrong permutation length");
  std::vector<Factor> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out.at(perm[i]) = f[i];
  const auto dims = rho.layout().dims();
  return DensityOperator::trusted(SystemLayout(std::move(out)),
                                  permute_factors(rho.matrix(), dims, perm));
}

}  // namespace cohcat
