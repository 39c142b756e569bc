#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cohcat/catalysis.hpp"
#include "cohcat/measures.hpp"
#include "oracles.hpp"

using namespace cohcat;

namespace {

const SystemLayout kQubit = SystemLayout::single("S", 2);

Matrix ket_bra(std::size_t dim, std::size_t k) {
  Matrix m = Matrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return m;
}

Matrix kron_power(const Matrix& a, std::size_t n) {
  Matrix m = Matrix::Identity(1, 1);
  for (std::size_t i = 0; i < n; ++i) m = oracle::kron(m, a);
  return m;
}

// Catalyst straight from its defining sum, with Gamma_i the reduction of
// gamma onto its last i copies of a d-dimensional system.
Matrix catalyst_oracle(const Matrix& rho, const Matrix& gamma, std::size_t d, std::size_t n) {
  const std::vector<std::size_t> dims(n, d);
  Matrix tau = Matrix::Zero(static_cast<Eigen::Index>(std::pow(d, n - 1) * n),
                            static_cast<Eigen::Index>(std::pow(d, n - 1) * n));
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix block = kron_power(rho, k - 1);
    if (k < n) {
      std::vector<bool> keep(n, false);
      for (std::size_t c = k; c < n; ++c) keep[c] = true;
      block = oracle::kron(block, oracle::partial_trace(gamma, dims, keep));
    }
    tau += oracle::kron(block, ket_bra(n, k - 1)) / static_cast<double>(n);
  }
  return tau;
}

// Permutation matrix on n copies of dimension d plus a trailing register of
// dimension n: copy i moves to copy (i+1) mod n.
Matrix cyclic_swap_oracle(std::size_t d, std::size_t n) {
  std::vector<std::size_t> dims(n, d);
  dims.push_back(n);
  std::size_t total = 1;
  for (auto x : dims) total *= x;
  Matrix p = Matrix::Zero(total, total);
  for (std::size_t in = 0; in < total; ++in) {
    const auto x = oracle::digits(in, dims);
    auto y = x;
    for (std::size_t c = 0; c < n; ++c) y[(c + 1) % n] = x[c];
    p(oracle::index_of(y, dims), in) = 1.0;
  }
  return p;
}

// Dense three-step protocol with an arbitrary n-copy map given by `apply_lambda`.
template <typename F>
Matrix protocol_oracle(const Matrix& rho, const Matrix& tau, std::size_t d, std::size_t n, F apply_lambda) {
  const Matrix initial = oracle::kron(rho, tau);
  const std::size_t sys = static_cast<std::size_t>(std::pow(d, n));
  // (i) split on the register.
  Matrix mu1 = Matrix::Zero(initial.rows(), initial.cols());
  for (std::size_t k = 0; k < n; ++k) {
    const Matrix proj = oracle::kron(Matrix::Identity(sys, sys), ket_bra(n, k));
    Matrix block = proj * initial * proj;
    if (k == n - 1) {
      const Matrix sys_part = oracle::partial_trace(block, {sys, n}, {true, false});
      block = oracle::kron(apply_lambda(sys_part), ket_bra(n, k));
    }
    mu1 += block;
  }
  // (ii) register shift.
  Matrix shift = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) shift((k + 1) % n, k) = 1.0;
  const Matrix s = oracle::kron(Matrix::Identity(sys, sys), shift);
  const Matrix mu2 = s * mu1 * s.adjoint();
  // (iii) cyclic copy permutation.
  const Matrix p = cyclic_swap_oracle(d, n);
  return p * mu2 * p.adjoint();
}

}  // namespace

TEST_CASE("build_catalyst for n = 2 and Gamma = sigma^2") {
  const DensityOperator rho = random_density(kQubit, 2, 1), sigma = random_density(kQubit, 2, 2);
  const CatalystState tau = build_catalyst(rho, tensor_power(sigma, 2), 2);
  const Matrix expected = 0.5 * (oracle::kron(sigma.matrix(), ket_bra(2, 0)) + oracle::kron(rho.matrix(), ket_bra(2, 1)));
  REQUIRE(tau.dense);
  CHECK((tau.dense->matrix() - expected).norm() <= 1e-15);
  CHECK_FALSE(tau.symmetrized);
}

TEST_CASE("build_catalyst matches the defining sum") {
  for (std::size_t n = 2; n <= 4; ++n) {
    const DensityOperator rho = random_density(kQubit, 2, n);
    const DensityOperator gamma = symmetrize(random_density(kQubit.copies(n), 3, 10 + n), n);
    const CatalystState tau = build_catalyst(rho, gamma, n);
    CHECK((tau.dense->matrix() - catalyst_oracle(rho.matrix(), gamma.matrix(), 2, n)).norm() <= 1e-14);
    CHECK(tau.total_dim() == static_cast<std::size_t>(std::pow(2, n - 1)) * n);
    double w = 0.0;
    for (const auto& b : tau.ensemble.blocks()) w += b.weight;
    CHECK(w == doctest::Approx(1.0));
    CHECK((tau.ensemble.dense().matrix() - tau.dense->matrix()).norm() <= 1e-12);
  }
  CHECK(build_catalyst(random_density(kQubit, 2, 1), tensor_power(random_density(kQubit, 2, 2), 3), 3).total_dim() == 12);
}

TEST_CASE("incoherent inputs give an incoherent catalyst") {
  const DensityOperator sigma = DensityOperator::diagonal(kQubit, {0.3, 0.7});
  const CatalystState tau = build_catalyst(sigma, tensor_power(sigma, 3), 3);
  CHECK(relative_entropy_of_coherence(*tau.dense).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("non-invariant Gamma is twirled and recorded") {
  const DensityOperator rho = random_density(kQubit, 2, 1);
  const DensityOperator gamma = random_density(kQubit.copies(3), 8, 5);
  const CatalystState tau = build_catalyst(rho, gamma, 3);
  CHECK(tau.symmetrized);
  CHECK(tau.input_asymmetry > 1e-3);
  CHECK(permutation_asymmetry(tau.gamma, 3) <= 1e-12);
  CHECK_THROWS_AS(build_catalyst(rho, random_density(kQubit.copies(2), 4, 1), 3), std::invalid_argument);
  CHECK_THROWS_AS(build_catalyst(rho, tensor_power(rho, 1), 1), std::invalid_argument);
}

TEST_CASE("exact target closes the protocol") {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const DensityOperator rho = random_density(kQubit, 2, 100 * n + s);
      const DensityOperator sigma = random_density(kQubit, 2, 200 * n + s);
      const DensityOperator gamma = tensor_power(sigma, n);
      const KrausChannel lambda = replacement_channel(kQubit.copies(n), gamma);
      const CatalystState tau = build_catalyst(rho, gamma, n);
      ProtocolOptions opt;
      opt.dense = DensePath::always;
      const ProtocolTrace t = run_protocol(rho, sigma, tau, lambda, opt);
      CHECK(t.distances.joint_to_target <= 1e-10);
      CHECK(t.distances.catalyst_return <= 1e-10);
      CHECK(t.distances.output_to_target <= 1e-10);
      CHECK(t.distances.gamma_to_target <= 1e-10);

      const Matrix expected = protocol_oracle(rho.matrix(), tau.dense->matrix(), 2, n,
                                              [&](const Matrix& x) { return Matrix(x.trace() * gamma.matrix()); });
      CHECK((t.mu_sc.dense().matrix() - expected).norm() <= 1e-12);
      CHECK((expected - oracle::kron(sigma.matrix(), tau.dense->matrix())).norm() <= 1e-10);
      REQUIRE(t.dense);
      CHECK(t.dense->max_deviation <= 1e-12);
    }
  }
}

TEST_CASE("identity lambda with rho = sigma leaves sigma (x) tau") {
  const DensityOperator sigma = random_density(kQubit, 2, 3);
  const std::size_t n = 3;
  const CatalystState tau = build_catalyst(sigma, tensor_power(sigma, n), n);
  const ProtocolTrace t = run_protocol(sigma, sigma, tau, identity_channel(kQubit.copies(n)));
  CHECK(t.distances.joint_to_target <= 1e-12);
  CHECK((t.mu_sc.dense().matrix() - oracle::kron(sigma.matrix(), tau.dense->matrix())).norm() <= 1e-12);
}

TEST_CASE("general lambda agrees with the dense oracle") {
  const std::size_t n = 3;
  const SystemLayout full = kQubit.copies(n);
  const DensityOperator rho = random_density(kQubit, 2, 8);
  const KrausChannel one = random_incoherent_channel(kQubit, 4);
  auto copy = [&](std::size_t c) {
    const SystemLayout l = SystemLayout::single("S#" + std::to_string(c), 2, "S");
    return one.with_layouts(l, l);
  };
  KrausChannel lambda = copy(1);
  for (std::size_t c = 2; c <= n; ++c) lambda = tensor(lambda, copy(c));
  const DensityOperator gamma = apply(lambda, tensor_power(rho, n));
  const CatalystState tau = build_catalyst(rho, gamma, n);
  REQUIRE_FALSE(tau.symmetrized);
  const DensityOperator sigma = relabel(gamma.reduced({"S#1"}), kQubit);
  ProtocolOptions opt;
  opt.dense = DensePath::always;
  const ProtocolTrace t = run_protocol(rho, sigma, tau, lambda, opt);
  const Matrix expected = protocol_oracle(rho.matrix(), tau.dense->matrix(), 2, n, [&](const Matrix& x) {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const Matrix& k : lambda.kraus()) out += k * x * k.adjoint();
    return out;
  });
  CHECK((t.mu_sc.dense().matrix() - expected).norm() <= 1e-12);
  CHECK(t.dense->max_deviation <= 1e-12);
  CHECK(t.certification.register_shift_incoherent);
  CHECK(t.certification.swap_incoherent);
  CHECK(t.certification.lambda_incoherent);
  CHECK(t.certification.step1_trace_error <= 1e-10);
}

TEST_CASE("twirled catalyst: dense and ensemble paths agree, catalyst returns") {
  const std::size_t n = 3;
  const SystemLayout full = kQubit.copies(n);
  const DensityOperator rho = random_density(kQubit, 2, 12);
  const KrausChannel lambda = random_incoherent_channel(full, 6);
  const DensityOperator raw = apply(lambda, tensor_power(rho, n));
  const CatalystState tau = build_catalyst(rho, raw, n);
  REQUIRE(tau.symmetrized);
  const DensityOperator sigma = relabel(tau.gamma.reduced({"S#1"}), kQubit);
  ProtocolOptions opt;
  opt.dense = DensePath::always;
  const ProtocolTrace t = run_protocol(rho, sigma, tau, lambda, opt);
  CHECK(t.certification.twirled);
  CHECK(t.distances.catalyst_return <= 1e-10);
  CHECK(t.distances.joint_to_target <= 2.0 * t.distances.gamma_to_target + 1e-9);
  REQUIRE(t.dense);
  CHECK(t.dense->max_deviation <= 1e-12);
}

TEST_CASE("distance bound under perturbed Gamma") {
  for (double eps : {1e-3, 1e-2, 1e-1}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const std::size_t n = 2 + s % 3;
      const DensityOperator rho = random_density(kQubit, 2, s), sigma = random_density(kQubit, 2, s + 11);
      const DensityOperator gamma = perturbed_target(sigma, n, eps, s + 22);
      CHECK(trace_distance(gamma, tensor_power(sigma, n)) == doctest::Approx(eps).epsilon(1e-9));
      CHECK(permutation_asymmetry(gamma, n) <= 1e-12);
      const ProtocolTrace t = run_protocol(rho, sigma, build_catalyst(rho, gamma, n),
                                           replacement_channel(kQubit.copies(n), gamma));
      CHECK(t.distances.catalyst_return <= 1e-10);
      CHECK(t.distances.joint_to_target <= 2.0 * t.distances.gamma_to_target + 1e-9);
    }
  }
}

TEST_CASE("output distance shrinks with the accuracy of Gamma") {
  const DensityOperator rho = random_density(kQubit, 2, 1), sigma = random_density(kQubit, 2, 2);
  const std::size_t n = 3;
  double previous = INFINITY;
  for (double eps : {0.2, 0.1, 0.05, 0.01, 1e-3, 0.0}) {
    const DensityOperator gamma = perturbed_target(sigma, n, eps, 77);
    const ProtocolTrace t = run_protocol(rho, sigma, build_catalyst(rho, gamma, n),
                                         replacement_channel(kQubit.copies(n), gamma));
    CHECK(t.distances.joint_to_target <= previous + 1e-12);
    previous = t.distances.joint_to_target;
  }
  CHECK(previous <= 1e-10);
}

TEST_CASE("run_protocol rejects incompatible inputs") {
  const DensityOperator rho = random_density(kQubit, 2, 1);
  const CatalystState tau = build_catalyst(rho, tensor_power(rho, 2), 2);
  CHECK_THROWS_AS(run_protocol(rho, rho, tau, identity_channel(kQubit.copies(3))), std::invalid_argument);
  const DensityOperator q3 = random_density(SystemLayout::single("S", 3), 3, 1);
  CHECK_THROWS_AS(run_protocol(q3, rho, tau, identity_channel(kQubit.copies(2))), std::invalid_argument);
}

TEST_CASE("catalytic_pure_feasible") {
  const SystemLayout q = kQubit;
  auto amp = [&](double p0) {
    Vector v(2);
    v << std::sqrt(p0), std::sqrt(1.0 - p0);
    return PureState(q, v);
  };
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(catalytic_pure_feasible(maximally_coherent(2), random_pure(q, s)));
  CHECK_FALSE(catalytic_pure_feasible(PureState::basis(q, 0), maximally_coherent(2)));
  // h(0.8) < h(0.7): not feasible.
  CHECK(oracle::h(0.8) < oracle::h(0.7));
  CHECK_FALSE(catalytic_pure_feasible(amp(0.8), amp(0.7)));
  CHECK(catalytic_pure_feasible(amp(0.7), amp(0.8)));
  const SystemLayout two({Factor{"A", 2, "A"}, Factor{"B", 2, "B"}});
  CHECK_THROWS_AS(catalytic_pure_feasible(random_pure(two, 1), random_pure(two, 2)), std::invalid_argument);
}

TEST_CASE("asymptotic_rate_feasible") {
  const PureState phi = random_pure(kQubit, 3);
  CHECK(asymptotic_rate_feasible(phi, phi, 0.5) == RateVerdict::possible);
  CHECK(asymptotic_rate_feasible(phi, phi, 2.0) == RateVerdict::impossible);
  CHECK(asymptotic_rate_feasible(phi, phi, 1.0) == RateVerdict::boundary);

  // Target with S(Delta phi) = 0.5: amplitudes from h(p) = 0.5.
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::h(mid) > 0.5 ? lo : hi) = mid;
  }
  Vector v(2);
  v << std::sqrt(lo), std::sqrt(1.0 - lo);
  const PureState half(kQubit, v);
  CHECK(asymptotic_rate_feasible(maximally_coherent(2), half, 1.9) == RateVerdict::possible);
  CHECK(asymptotic_rate_feasible(maximally_coherent(2), half, 2.1) == RateVerdict::impossible);
  CHECK_THROWS_AS(asymptotic_rate_feasible(phi, PureState::basis(kQubit, 0), 1.0), std::invalid_argument);
}

TEST_CASE("monotonicity harness") {
  const ExperimentReport r = monotonicity_harness(60, 5);
  CHECK(r.passed);
  CHECK(r.rows.size() == 60);
  CHECK(r.summary["violations"] == 0);
  CHECK(r.summary["rejected"] == 0);
  const ExperimentReport again = monotonicity_harness(60, 5);
  CHECK(again.to_csv() == r.to_csv());
}

TEST_CASE("certification gate rejects coherence-creating lambda") {
  const std::size_t n = 2;
  const SystemLayout full = kQubit.copies(n);
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const KrausChannel hadamards = unitary_channel(full, oracle::kron(h, h));
  TrialInput in{TrialKind::incoherent, DensityOperator::diagonal(kQubit, {1, 0}), n, hadamards, std::nullopt, {}, std::nullopt};
  const TrialOutcome out = evaluate_trial(in);
  CHECK(out.verdict == Verdict::rejected);

  // LQICC with a coherent Bob part.
  const SystemLayout ab({Factor{"A", 2, "A"}, Factor{"B", 2, "B"}});
  const SystemLayout fab = ab.copies(n);
  const KrausChannel bob = unitary_channel(fab.restricted_to({"B#1", "B#2"}), oracle::kron(h, h));
  TrialInput lq{TrialKind::lqicc, random_density(ab, 4, 1), n, embed(bob, fab, {"B#1", "B#2"}), bob, {"B"}, std::nullopt};
  CHECK(evaluate_trial(lq).verdict == Verdict::rejected);

  // Exact-target trial that fails the pure-state criterion.
  const DensityOperator target = maximally_coherent(2).density();
  TrialInput et{TrialKind::exact_target, PureState::basis(kQubit, 0).density(), n,
                replacement_channel(full, tensor_power(target, n)), std::nullopt, {}, target};
  CHECK(evaluate_trial(et).verdict == Verdict::rejected);
}

TEST_CASE("stream_seed is deterministic and spreads streams") {
  CHECK(stream_seed(1, 2) == stream_seed(1, 2));
  CHECK(stream_seed(1, 2) != stream_seed(1, 3));
  CHECK(stream_seed(1, 2) != stream_seed(2, 2));
}
