#include "cohcat/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cohcat/tolerance.hpp"

namespace cohcat {

const char* to_string(Certification c) {
  return c == Certification::exact ? "exact" : "upper-bound";
}

MeasureResult relative_entropy_of_coherence(const DensityOperator& rho) {
  return {dephase(rho).entropy() - rho.entropy(), Certification::exact, {}};
}

MeasureResult distillable_coherence(const DensityOperator& rho) {
  return relative_entropy_of_coherence(rho);
}

double qubit_coherence_of_formation(const DensityOperator& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("qubit_coherence_of_formation: not a qubit");
  const double c = std::abs(rho.matrix()(0, 1));
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * c * c)));
  const double p[2] = {x, 1.0 - x};
  return shannon_entropy(p);
}

double dephased_entropy(const PureState& psi) {
  std::vector<double> p(psi.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(psi.amplitudes()(i));
  return shannon_entropy(p);
}

void require_pure(const DensityOperator& rho, const char* what) {
  const double largest = hermitian_eigenvalues(rho.matrix())(0);
  if (largest < 1.0 - tol::equality) {
    throw std::invalid_argument(std::string(what) + ": input is mixed, a pure state is required");
  }
}

MeasureResult coherence_of_formation(const DensityOperator& rho, const FormationOptions& options) {
  if (!options.force_optimizer) {
    if (is_incoherent(rho)) return {0.0, Certification::exact, {}};
    if (rho.dim() == 2) return {qubit_coherence_of_formation(rho), Certification::exact, {}};
    const Spectrum s = hermitian_eig(rho.matrix());
    if (s.eigenvalues(0) >= 1.0 - tol::psd) {
      const PureState psi(rho.layout(), Vector(s.eigenvectors.col(0)));
      return {dephased_entropy(psi), Certification::exact, {}};
    }
  }
  return optimize_coherence_of_formation(rho, options);
}

MeasureResult coherence_cost(const DensityOperator& rho, const FormationOptions& options) {
  return coherence_of_formation(rho, options);
}

MeasureResult qi_relative_entropy(const DensityOperator& rho, const std::vector<std::string>& party_b) {
  return {dephase(rho, party_b).entropy() - rho.entropy(), Certification::exact, {}};
}

double entanglement_entropy(const PureState& psi, const std::vector<std::string>& party_a) {
  return psi.density().reduced(party_a).entropy();
}

double entanglement_entropy(const DensityOperator& rho, const std::vector<std::string>& party_a) {
  require_pure(rho, "entanglement_entropy");
  return rho.reduced(party_a).entropy();
}

}  // namespace cohcat
