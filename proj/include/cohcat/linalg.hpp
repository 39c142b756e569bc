#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cohcat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are sorted in
/// descending order and eigenvectors are the matching columns.
struct Spectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

/// Largest elementwise deviation |a_ij - conj(a_ji)|.
double hermiticity_error(const Matrix& a);

/// Throws std::invalid_argument if `a` is not square or not Hermitian within
/// tol::symmetry. `what` names the operand in the diagnostic.
void require_hermitian(const Matrix& a, const char* what = "matrix");

/// (A + A^dagger) / 2.
Matrix hermitian_part(const Matrix& a);

Spectrum hermitian_eig(const Matrix& a);

/// Eigenvalues only, descending.
RealVector hermitian_eigenvalues(const Matrix& a);

/// Kronecker product with (a (x) b)[(i,k),(j,l)] = a[i][j] * b[k][l].
Matrix tensor_product(const Matrix& a, const Matrix& b);
Vector tensor_product(const Vector& a, const Vector& b);

/// Partial trace over a row-major tensor layout. `dims` are the factor
/// dimensions (first factor most significant); `keep` lists the factor
/// positions that survive, in any order. The result keeps the surviving
/// factors in their original relative order.
Matrix partial_trace(const Matrix& a, std::span<const std::size_t> dims,
                     std::span<const std::size_t> keep);

/// Reorders tensor factors: the content of factor i moves to position
/// perm[i]. Pure reindexing, no arithmetic.
Matrix permute_factors(const Matrix& a, std::span<const std::size_t> dims,
                       std::span<const std::size_t> perm);
Vector permute_factors(const Vector& v, std::span<const std::size_t> dims,
                       std::span<const std::size_t> perm);

/// Permutation matrix P with P |x_0 ... x_{F-1}> = |y>, y_{perm[i]} = x_i.
Matrix permutation_unitary(std::span<const std::size_t> dims,
                           std::span<const std::size_t> perm);

/// D(a, b) = 1/2 sum |eig(a - b)|.
double trace_distance(const Matrix& a, const Matrix& b);

/// Von Neumann entropy in bits. Input must be a state (PSD within tol::psd,
/// unit trace within tol::psd); eigenvalues below tol::eigen_clamp count as 0.
double von_neumann_entropy(const Matrix& a);

/// Shannon entropy (bits) of a nonnegative vector, 0 log 0 = 0.
double shannon_entropy(std::span<const double> p);

/// S(rho || sigma) in bits; +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const Matrix& rho, const Matrix& sigma);

/// Validates the state preconditions shared by the entropy functions.
void require_state(const Matrix& a, const char* what = "state");

}  // namespace cohcat
