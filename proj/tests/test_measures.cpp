#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cohcat/channels.hpp"
#include "cohcat/measures.hpp"
#include "cohcat/states.hpp"
#include "oracles.hpp"

using namespace cohcat;

namespace {

const SystemLayout kQubit = SystemLayout::single("S", 2);
const SystemLayout kAB({Factor{"A", 2, "A"}, Factor{"B", 2, "B"}});

PureState qubit(double p0) {
  Vector v(2);
  v << std::sqrt(p0), std::sqrt(1.0 - p0);
  return PureState(kQubit, v);
}

PureState phi_plus() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState(kAB, v);
}

}  // namespace

TEST_CASE("relative entropy of coherence examples") {
  CHECK(relative_entropy_of_coherence(maximally_coherent(2).density()).value == doctest::Approx(1.0));
  CHECK(relative_entropy_of_coherence(DensityOperator::diagonal(kQubit, {0.2, 0.8})).value == doctest::Approx(0.0));
  const auto r = relative_entropy_of_coherence(qubit(0.8).density());
  CHECK(r.value == doctest::Approx(oracle::h(0.8)).epsilon(1e-12));
  CHECK(r.certified == Certification::exact);
}

TEST_CASE("relative entropy of coherence matches the variational minimum") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityOperator rho = random_density(kQubit, 1 + s % 2, s);
    CHECK(std::abs(relative_entropy_of_coherence(rho).value - oracle::grid_relative_entropy_of_coherence(rho.matrix())) <= 1e-4);
  }
}

TEST_CASE("distillable coherence") {
  CHECK(distillable_coherence(maximally_coherent(2).density()).value == doctest::Approx(1.0));
  CHECK(distillable_coherence(DensityOperator::diagonal(kQubit, {0.5, 0.5})).value == doctest::Approx(0.0));
  for (std::uint64_t s = 0; s < 200; ++s) {
    const DensityOperator rho = random_density(kQubit, 1 + s % 2, 300 + s);
    CHECK(distillable_coherence(rho).value <= coherence_cost(rho).value + 1e-9);
  }
}

TEST_CASE("coherence of formation examples") {
  const PureState psi = random_pure(SystemLayout::single("S", 4), 3);
  const auto pure = coherence_of_formation(psi.density());
  CHECK(pure.value == doctest::Approx(relative_entropy_of_coherence(psi.density()).value).epsilon(1e-9));
  CHECK(pure.certified == Certification::exact);

  Matrix m(2, 2);
  m << 0.5, 0.3, 0.3, 0.5;
  const DensityOperator q(kQubit, m);
  const double expected = oracle::h((1.0 + std::sqrt(1.0 - 4.0 * 0.09)) / 2.0);
  CHECK(expected == doctest::Approx(oracle::h(0.9)));
  CHECK(expected == doctest::Approx(0.468996).epsilon(1e-6));
  CHECK(coherence_of_formation(q).value == doctest::Approx(expected).epsilon(1e-12));

  CHECK(coherence_of_formation(DensityOperator::diagonal(SystemLayout::single("S", 3), {0.2, 0.3, 0.5})).value == 0.0);
}

TEST_CASE("coherence of formation optimizer") {
  SUBCASE("agrees with the qubit closed form") {
    FormationOptions o;
    o.force_optimizer = true;
    for (std::uint64_t s = 0; s < 30; ++s) {
      const DensityOperator rho = random_density(kQubit, 2, 900 + s);
      const auto r = coherence_of_formation(rho, o);
      CHECK(r.certified == Certification::upper_bound);
      CHECK(std::abs(r.value - qubit_coherence_of_formation(rho)) <= 1e-6);
    }
  }
  SUBCASE("is an upper bound dominating C_r, deterministic for a seed") {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const DensityOperator rho = random_density(SystemLayout::single("S", 3), 2 + s % 2, 40 + s);
      const auto r = coherence_of_formation(rho);
      CHECK(r.certified == Certification::upper_bound);
      CHECK(r.value >= relative_entropy_of_coherence(rho).value - 1e-9);
      CHECK(r.value <= dephase(rho).entropy() + 1e-9);  // concavity of S
      CHECK(r.diagnostics.restarts == 32);
      CHECK(coherence_of_formation(rho).value == r.value);
    }
  }
  SUBCASE("block-diagonal mixture of coherent pure states") {
    // rho = 1/2 |+><+| (x) |0><0| + 1/2 |0><0| (x) |1><1| decomposes into
    // members of coherence 1 and 0; C_f = 1/2 exactly.
    const SystemLayout two({Factor{"X", 2, "X"}, Factor{"Y", 2, "Y"}});
    Vector a = Vector::Zero(4), b = Vector::Zero(4);
    a(0) = a(2) = 1.0 / std::sqrt(2.0);
    b(1) = 1.0;
    const DensityOperator rho(two, 0.5 * (a * a.adjoint() + b * b.adjoint()));
    const auto r = coherence_of_formation(rho);
    CHECK(std::abs(r.value - 0.5) <= 1e-6);
    CHECK(r.value >= 0.5 - 1e-9);
  }
}

TEST_CASE("coherence cost") {
  CHECK(coherence_cost(maximally_coherent(2).density()).value == doctest::Approx(1.0));
  CHECK(coherence_cost(DensityOperator::diagonal(kQubit, {0.1, 0.9})).value == 0.0);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const DensityOperator rho = random_density(kQubit, 2, 700 + s);
    CHECK(coherence_cost(rho).value >= distillable_coherence(rho).value - 1e-9);
  }
}

TEST_CASE("C_r additivity and superadditivity") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityOperator a = random_density(SystemLayout::single("A", 2), 2, s);
    const DensityOperator b = random_density(SystemLayout::single("B", 3), 1 + s % 3, s + 40);
    CHECK(std::abs(relative_entropy_of_coherence(tensor(a, b)).value -
                   relative_entropy_of_coherence(a).value - relative_entropy_of_coherence(b).value) <= 1e-9);
    const DensityOperator ab = random_density(kAB, 1 + s % 4, s + 80);
    CHECK(relative_entropy_of_coherence(ab).value >=
          relative_entropy_of_coherence(ab.reduced({"A"})).value + relative_entropy_of_coherence(ab.reduced({"B"})).value - 1e-9);
  }
}

TEST_CASE("C_f dominates C_r and is monotone under incoherent channels") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const DensityOperator rho = random_density(kQubit, 2, 1200 + s);
    const double cf = coherence_of_formation(rho).value;
    CHECK(cf >= relative_entropy_of_coherence(rho).value - 1e-9);
    const KrausChannel ch = random_incoherent_channel(kQubit, s);
    CHECK(coherence_of_formation(apply(ch, rho)).value <= cf + 1e-6);
    CHECK(relative_entropy_of_coherence(apply(ch, rho)).value <= relative_entropy_of_coherence(rho).value + 1e-9);
  }
}

TEST_CASE("quantum-incoherent relative entropy") {
  const DensityOperator qi = tensor(random_density(SystemLayout::single("A", 2), 2, 1),
                                    PureState::basis(SystemLayout::single("B", 2), 1).density());
  CHECK(qi_relative_entropy(qi, {"B"}).value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(qi_relative_entropy(phi_plus().density(), {"B"}).value == doctest::Approx(1.0));

  // Pure state: S(Delta^B psi) and S(Delta psi^B) coincide, but the two
  // expressions are computed separately here.
  for (std::uint64_t s = 0; s < 10; ++s) {
    const PureState psi = random_pure(kAB, s);
    const double joint = dephase(psi.density(), {"B"}).entropy();
    const double marginal = dephase(psi.density().reduced({"B"})).entropy();
    CHECK(qi_relative_entropy(psi.density(), {"B"}).value == doctest::Approx(joint).epsilon(1e-12));
    CHECK(std::abs(joint - marginal) <= 1e-9);
  }
}

TEST_CASE("qi relative entropy vanishes exactly on QI states") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    // sum_i p_i sigma_i (x) |i><i|
    const SystemLayout a = SystemLayout::single("A", 2), b = SystemLayout::single("B", 3);
    Matrix m = Matrix::Zero(6, 6);
    const DensityOperator p = random_density(b, 3, s);
    for (std::size_t i = 0; i < 3; ++i) {
      m += p.matrix()(i, i).real() *
           oracle::kron(random_density(a, 1 + i % 2, 10 * s + i).matrix(), PureState::basis(b, i).density().matrix());
    }
    const DensityOperator qi(a.concat(b), m);
    CHECK(is_quantum_incoherent(qi, {"B"}));
    CHECK(qi_relative_entropy(qi, {"B"}).value <= 1e-9);

    const DensityOperator generic = random_density(a.concat(b), 1 + s % 6, 500 + s);
    CHECK_FALSE(is_quantum_incoherent(generic, {"B"}));
    CHECK(qi_relative_entropy(generic, {"B"}).value > 1e-9);
  }
}

TEST_CASE("qi relative entropy superadditivity on product states") {
  const SystemLayout cd({Factor{"C", 2, "C"}, Factor{"D", 2, "D"}});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityOperator r1 = random_density(kAB, 1 + s % 4, s);
    const DensityOperator r2 = random_density(cd, 1 + (s + 1) % 4, s + 30);
    const double lhs = qi_relative_entropy(r1, {"B"}).value + qi_relative_entropy(r2, {"D"}).value;
    CHECK(lhs <= qi_relative_entropy(tensor(r1, r2), {"B", "D"}).value + 1e-9);
  }
}

TEST_CASE("entanglement entropy") {
  CHECK(entanglement_entropy(phi_plus(), {"A"}) == doctest::Approx(1.0));
  CHECK(entanglement_entropy(PureState::basis(kAB, 2), {"A"}) == doctest::Approx(0.0));
  Vector v = Vector::Zero(4);
  v(0) = std::sqrt(0.9);
  v(3) = std::sqrt(0.1);
  CHECK(entanglement_entropy(PureState(kAB, v), {"A"}) == doctest::Approx(oracle::h(0.9)).epsilon(1e-12));
  CHECK_THROWS_AS(entanglement_entropy(random_density(kAB, 2, 1), {"A"}), std::invalid_argument);
}

TEST_CASE("measure values are nonnegative") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityOperator rho = random_density(kAB, 1 + s % 4, 2000 + s);
    CHECK(relative_entropy_of_coherence(rho).value >= -1e-9);
    CHECK(qi_relative_entropy(rho, {"A"}).value >= -1e-9);
  }
}
