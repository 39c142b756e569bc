// Variational coherence of formation.
//
// Every pure-state decomposition of rho = W W^dagger (W = V sqrt(Lambda),
// rank r) has the form psi~_i = sum_k U_ik w_k for an m x r isometry U, so
// the members are the columns of Psi = W U^T. U is refined by gradient
// descent along Cayley curves, which keep U^dagger U = I, alternated with
// coarse Givens-rotation sweeps between pairs of members to leave shallow
// local minima.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cohcat/measures.hpp"
#include "cohcat/tolerance.hpp"

namespace cohcat {

namespace {

// p * H(q / p) for q_j = |x_j|^2, p = sum q_j.
double member_cost(const Complex* x, Eigen::Index d) {
  double p = 0.0, s = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double q = std::norm(x[j]);
    if (q > 0.0) {
      s -= q * std::log2(q);
      p += q;
    }
  }
  if (p > 0.0) s += p * std::log2(p);
  return s;
}

double total_cost(const Matrix& psi) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < psi.cols(); ++i) s += member_cost(psi.col(i).data(), psi.rows());
  return s;
}

class Objective {
 public:
  Objective(const Matrix& w, long long& evaluations) : w_(w), evaluations_(evaluations) {}

  double operator()(const Matrix& u) const {
    ++evaluations_;
    return total_cost(w_ * u.transpose());
  }

  // dF/d conj(U).
  Matrix gradient(const Matrix& u) const {
    Matrix g = w_ * u.transpose();
    for (Eigen::Index i = 0; i < g.cols(); ++i) {
      double p = 0.0;
      for (Eigen::Index j = 0; j < g.rows(); ++j) p += std::norm(g(j, i));
      for (Eigen::Index j = 0; j < g.rows(); ++j) {
        const double q = std::norm(g(j, i));
        g(j, i) = q > 0.0 ? g(j, i) * std::log2(p / q) : Complex(0.0);
      }
    }
    return g.transpose() * w_.conjugate();
  }

 private:
  const Matrix& w_;
  long long& evaluations_;
};

Matrix reorthonormalize(const Matrix& u) {
  Eigen::HouseholderQR<Matrix> qr(u);
  Matrix q = qr.householderQ() * Matrix::Identity(u.rows(), u.cols());
  // Keep the phases of the original columns.
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    const Complex overlap = q.col(k).dot(u.col(k));
    if (std::abs(overlap) > 0.0) q.col(k) *= overlap / std::abs(overlap);
  }
  return q;
}

// Armijo descent along U(t) = (I + t/2 A)^-1 (I - t/2 A) U with
// A = G U^dagger - U G^dagger.
double descend(const Objective& f, Matrix& u, double value, int max_iterations) {
  const Eigen::Index m = u.rows();
  const Matrix id = Matrix::Identity(m, m);
  double step = 1.0;
  int stalled = 0;
  for (int it = 0; it < max_iterations; ++it) {
    const Matrix g = f.gradient(u);
    const Matrix a = g * u.adjoint() - u * g.adjoint();
    const double slope = -2.0 * (g.adjoint() * a * u).trace().real();
    if (!(slope < -1e-15)) break;
    step = std::min(step * 2.0, 1e3);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
      const Matrix trial = (id + 0.5 * step * a).partialPivLu().solve((id - 0.5 * step * a) * u);
      const double v = f(trial);
      if (v <= value + 1e-4 * step * slope) {
        stalled = value - v < 1e-13 ? stalled + 1 : 0;
        u = trial;
        value = v;
        accepted = true;
        break;
      }
    }
    if (!accepted || stalled >= 5) break;
  }
  u = reorthonormalize(u);
  return f(u);
}

// One pass over member pairs, each trying a grid of rotations
// [c, -e s; conj(e) s, c] and keeping the best.
bool givens_sweep(const Objective& f, Matrix& u, double& value, double tolerance) {
  constexpr int kTheta = 9, kPhi = 16;
  constexpr double kPi = std::numbers::pi;
  bool improved = false;
  for (Eigen::Index a = 0; a < u.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < u.rows(); ++b) {
      Matrix best_u;
      double best = value;
      for (int i = 1; i < kTheta; ++i) {
        const double c = std::cos(0.5 * kPi * i / kTheta), s = std::sin(0.5 * kPi * i / kTheta);
        for (int j = 0; j < kPhi; ++j) {
          const Complex e = std::polar(1.0, 2.0 * kPi * j / kPhi);
          Matrix trial = u;
          trial.row(a) = c * u.row(a) - e * s * u.row(b);
          trial.row(b) = std::conj(e) * s * u.row(a) + c * u.row(b);
          const double v = f(trial);
          if (v < best) {
            best = v;
            best_u = std::move(trial);
          }
        }
      }
      if (best < value - tolerance) {
        u = std::move(best_u);
        value = best;
        improved = true;
      }
    }
  }
  return improved;
}

Matrix random_isometry(Eigen::Index m, Eigen::Index r, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(m, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(m, r);
}

}  // namespace

MeasureResult optimize_coherence_of_formation(const DensityOperator& rho,
                                              const FormationOptions& options) {
  const Spectrum s = hermitian_eig(rho.matrix());
  Eigen::Index rank = 0;
  while (rank < s.eigenvalues.size() && s.eigenvalues(rank) > tol::eigen_clamp) ++rank;
  rank = std::max<Eigen::Index>(rank, 1);

  Matrix w(rho.dim(), rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    w.col(k) = std::sqrt(std::max(0.0, s.eigenvalues(k))) * s.eigenvectors.col(k);
  }

  MeasureResult result;
  result.certified = Certification::upper_bound;
  result.value = std::numeric_limits<double>::infinity();
  const Objective f(w, result.diagnostics.evaluations);
  const int restarts = std::max(1, options.restarts);
  const Eigen::Index extra_sizes = rank * rank - rank + 1;
  const int descent_iterations = 2000;

  for (int restart = 0; restart < restarts; ++restart) {
    const Eigen::Index m = rank + restart % extra_sizes;
    std::mt19937_64 rng(options.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart + 1));
    Matrix u = restart == 0 ? Matrix(Matrix::Identity(m, rank)) : random_isometry(m, rank, rng);

    double cost = descend(f, u, f(u), descent_iterations);
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      ++result.diagnostics.sweeps;
      if (!givens_sweep(f, u, cost, options.tolerance)) break;
      cost = descend(f, u, cost, descent_iterations);
    }
    if (cost < result.value) {
      result.value = cost;
      result.diagnostics.best_restart = restart;
    }
    ++result.diagnostics.restarts;
  }
  return result;
}

}  // namespace cohcat
