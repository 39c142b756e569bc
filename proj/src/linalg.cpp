#include "cohcat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cohcat/tolerance.hpp"

namespace cohcat {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * dims[i];
  }
  return strides;
}

void require_permutation(std::span<const std::size_t> dims,
                         std::span<const std::size_t> perm) {
  if (perm.size() != dims.size()) {
    throw std::invalid_argument("permutation length does not match factor count");
  }
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= perm.size() || seen[perm[i]]) {
      throw std::invalid_argument("not a permutation of the factor positions");
    }
    seen[perm[i]] = true;
  }
}

// Maps every input basis index to its image under the factor permutation.
std::vector<std::size_t> permuted_indices(std::span<const std::size_t> dims,
                                          std::span<const std::size_t> perm) {
  require_permutation(dims, perm);
  std::vector<std::size_t> out_dims(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) out_dims[perm[i]] = dims[i];
  const auto in_strides = strides_of(dims);
  const auto out_strides = strides_of(out_dims);
  const std::size_t total = product(dims);
  std::vector<std::size_t> map(total);
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t y = 0;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      const std::size_t digit = (x / in_strides[f]) % dims[f];
      y += digit * out_strides[perm[f]];
    }
    map[x] = y;
  }
  return map;
}

}  // namespace

double hermiticity_error(const Matrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

void require_hermitian(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream msg;
    msg << what << ": expected a non-empty square matrix, got " << a.rows() << "x"
        << a.cols();
    throw std::invalid_argument(msg.str());
  }
  const double err = hermiticity_error(a);
  if (err > tol::symmetry) {
    std::ostringstream msg;
    msg << what << ": not Hermitian (max |a_ij - conj(a_ji)| = " << err << ")";
    throw std::invalid_argument(msg.str());
  }
}

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

Spectrum hermitian_eig(const Matrix& a) {
  require_hermitian(a, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  // Eigen sorts ascending; reverse into descending order.
  const auto n = a.rows();
  Spectrum s{RealVector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    s.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return s;
}

RealVector hermitian_eigenvalues(const Matrix& a) {
  require_hermitian(a, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix partial_trace(const Matrix& a, std::span<const std::size_t> dims,
                     std::span<const std::size_t> keep) {
  const std::size_t total = product(dims);
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != total) {
    std::ostringstream msg;
    msg << "partial_trace: layout dimension " << total << " does not match matrix "
        << a.rows() << "x" << a.cols();
    throw std::invalid_argument(msg.str());
  }
  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) {
    if (k >= dims.size()) throw std::invalid_argument("partial_trace: factor out of range");
    if (kept[k]) throw std::invalid_argument("partial_trace: duplicate factor in keep set");
    kept[k] = true;
  }
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");

  const auto strides = strides_of(dims);
  std::size_t keep_dim = 1, trace_dim = 1;
  for (std::size_t f = 0; f < dims.size(); ++f) (kept[f] ? keep_dim : trace_dim) *= dims[f];

  // full[k * trace_dim + t]: full index of kept digits k and traced digits t,
  // each enumerated row-major over their own factors.
  std::vector<std::size_t> full(total);
  for (std::size_t k = 0; k < keep_dim; ++k) {
    for (std::size_t t = 0; t < trace_dim; ++t) {
      std::size_t kr = k, tr = t, idx = 0;
      for (std::size_t f = dims.size(); f-- > 0;) {
        std::size_t digit;
        if (kept[f]) {
          digit = kr % dims[f];
          kr /= dims[f];
        } else {
          digit = tr % dims[f];
          tr /= dims[f];
        }
        idx += digit * strides[f];
      }
      full[k * trace_dim + t] = idx;
    }
  }

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (std::size_t r = 0; r < keep_dim; ++r) {
    for (std::size_t c = 0; c < keep_dim; ++c) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < trace_dim; ++t) {
        acc += a(full[r * trace_dim + t], full[c * trace_dim + t]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Matrix permute_factors(const Matrix& a, std::span<const std::size_t> dims,
                       std::span<const std::size_t> perm) {
  const auto map = permuted_indices(dims, perm);
  if (static_cast<std::size_t>(a.rows()) != map.size() || a.rows() != a.cols()) {
    throw std::invalid_argument("permute_factors: matrix does not match layout");
  }
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = 0; j < map.size(); ++j) out(map[i], map[j]) = a(i, j);
  }
  return out;
}

Vector permute_factors(const Vector& v, std::span<const std::size_t> dims,
                       std::span<const std::size_t> perm) {
  const auto map = permuted_indices(dims, perm);
  if (static_cast<std::size_t>(v.size()) != map.size()) {
    throw std::invalid_argument("permute_factors: vector does not match layout");
  }
  Vector out(v.size());
  for (std::size_t i = 0; i < map.size(); ++i) out(map[i]) = v(i);
  return out;
}

Matrix permutation_unitary(std::span<const std::size_t> dims,
                           std::span<const std::size_t> perm) {
  const auto map = permuted_indices(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t x = 0; x < map.size(); ++x) p(map[x], x) = 1.0;
  return p;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << "trace_distance: dimension mismatch " << a.rows() << " vs " << b.rows();
    throw std::invalid_argument(msg.str());
  }
  const RealVector ev = hermitian_eigenvalues(a - b);
  return 0.5 * ev.cwiseAbs().sum();
}

void require_state(const Matrix& a, const char* what) {
  require_hermitian(a, what);
  const double tr = a.trace().real();
  if (std::abs(tr - 1.0) > tol::psd) {
    std::ostringstream msg;
    msg << what << ": trace " << tr << " differs from 1";
    throw std::invalid_argument(msg.str());
  }
  const double min_ev = hermitian_eigenvalues(a).minCoeff();
  if (min_ev < -tol::psd) {
    std::ostringstream msg;
    msg << what << ": negative eigenvalue " << min_ev;
    throw std::invalid_argument(msg.str());
  }
}

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) {
    if (x > tol::eigen_clamp) s -= x * std::log2(x);
  }
  return s;
}

double von_neumann_entropy(const Matrix& a) {
  require_hermitian(a, "von_neumann_entropy");
  const RealVector ev = hermitian_eigenvalues(a);
  const double tr = ev.sum();
  if (std::abs(tr - 1.0) > tol::psd || ev.minCoeff() < -tol::psd) {
    std::ostringstream msg;
    msg << "von_neumann_entropy: not a state (trace " << tr << ", min eigenvalue "
        << ev.minCoeff() << ")";
    throw std::invalid_argument(msg.str());
  }
  return shannon_entropy(std::span<const double>(ev.data(), ev.size()));
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  require_state(rho, "relative_entropy(rho)");
  require_state(sigma, "relative_entropy(sigma)");
  if (rho.rows() != sigma.rows()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  const Spectrum s = hermitian_eig(sigma);
  double cross = 0.0;  // -Tr rho log sigma
  double leaked = 0.0;  // weight of rho outside supp(sigma)
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    const Vector v = s.eigenvectors.col(k);
    const double weight = (v.adjoint() * rho * v)(0, 0).real();
    const double mu = s.eigenvalues(k);
    if (mu > tol::eigen_clamp) {
      cross -= weight * std::log2(mu);
    } else {
      leaked += weight;
    }
  }
  if (leaked > tol::psd) return std::numeric_limits<double>::infinity();
  return cross - von_neumann_entropy(rho);
}

}  // namespace cohcat
