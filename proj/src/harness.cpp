#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cohcat/catalysis.hpp"
#include "cohcat/measures.hpp"
#include "cohcat/tolerance.hpp"

namespace cohcat {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

const char* to_string(TrialKind k) {
  switch (k) {
    case TrialKind::incoherent: return "incoherent";
    case TrialKind::lqicc: return "lqicc";
    case TrialKind::exact_target: return "exact-target";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::violation: return "violation";
    case Verdict::rejected: return "rejected";
  }
  return "?";
}

namespace {

constexpr double kRatioFloor = 1e-12;

double ratio_of(double dist, double eps) { return eps > kRatioFloor ? dist / eps : 0.0; }

TrialOutcome rejected(std::string reason) {
  TrialOutcome out;
  out.verdict = Verdict::rejected;
  out.reason = std::move(reason);
  return out;
}

std::vector<std::string> first_copy_labels(const SystemLayout& system) {
  return system.relabeled("#1").labels();
}

}  // namespace

TrialOutcome evaluate_trial(const TrialInput& input, const ProtocolOptions& options) {
  const SystemLayout& system = input.rho.layout();
  const std::size_t n = input.copies;
  const SystemLayout full = system.copies(n);

  // Certification gate: nothing below runs for an uncertified channel.
  switch (input.kind) {
    case TrialKind::incoherent:
      if (!is_incoherent_operation(input.lambda)) {
        return rejected("lambda is not an incoherent operation");
      }
      break;
    case TrialKind::lqicc:
      if (!input.bob_part || !is_incoherent_operation(*input.bob_part)) {
        return rejected("Bob's part of lambda is not an incoherent operation");
      }
      if (input.party_b.empty()) return rejected("no factors assigned to Bob");
      break;
    case TrialKind::exact_target: {
      if (!input.target) return rejected("exact-target trial without a target");
      const Spectrum in = hermitian_eig(input.rho.matrix());
      const Spectrum tg = hermitian_eig(input.target->matrix());
      if (in.eigenvalues(0) < 1.0 - tol::equality || tg.eigenvalues(0) < 1.0 - tol::equality) {
        return rejected("exact-target trials need pure input and target");
      }
      const PureState psi(system, Vector(in.eigenvectors.col(0)));
      const PureState phi(input.target->layout(), Vector(tg.eigenvectors.col(0)));
      if (!catalytic_pure_feasible(psi, phi)) {
        return rejected("pure-state criterion S(Delta psi) >= S(Delta phi) fails");
      }
      break;
    }
  }

  const DensityOperator gamma = relabel(apply(input.lambda, tensor_power(input.rho, n)), full);
  const DensityOperator sigma =
      input.kind == TrialKind::exact_target
          ? relabel(*input.target, system)
          : relabel(symmetrize(gamma, n).reduced(first_copy_labels(system)), system);
  const CatalystState tau = build_catalyst(input.rho, gamma, n);
  const ProtocolTrace trace = run_protocol(input.rho, sigma, tau, input.lambda, options);

  TrialOutcome out;
  out.eps_in = trace.distances.gamma_to_target;
  out.dist_out = trace.distances.joint_to_target;
  out.ratio = ratio_of(out.dist_out, out.eps_in);
  out.catalyst_return = trace.distances.catalyst_return;

  if (input.kind == TrialKind::lqicc) {
    out.cr_in = qi_relative_entropy(input.rho, input.party_b).value;
    out.cr_out = qi_relative_entropy(trace.output, input.party_b).value;
  } else {
    out.cr_in = relative_entropy_of_coherence(input.rho).value;
    out.cr_out = relative_entropy_of_coherence(trace.output).value;
    out.cf_in = coherence_of_formation(input.rho).value;
    out.cf_out = coherence_of_formation(trace.output).value;
  }

  std::ostringstream why;
  if (out.catalyst_return > tol::psd) why << "catalyst not returned; ";
  if (out.dist_out > 2.0 * out.eps_in + tol::equality) why << "distance bound exceeded; ";
  if (out.cr_out > out.cr_in + tol::equality) why << "relative entropy measure increased; ";
  if (out.cf_in && *out.cf_out > *out.cf_in + tol::optimizer) {
    why << "coherence of formation increased; ";
  }
  out.reason = why.str();
  if (!out.reason.empty()) {
    out.verdict = Verdict::violation;
    out.reason.resize(out.reason.size() - 2);
  }
  return out;
}

TrialInput sample_trial(std::uint64_t seed, std::size_t index) {
  std::mt19937_64 rng(stream_seed(seed, index));
  switch (index % 3) {
    case 0: {
      const auto system = SystemLayout::single("S", 2);
      const std::size_t n = 2 + (index / 3) % 2;
      const std::size_t rank = 1 + rng() % 2;
      DensityOperator rho = random_density(system, rank, rng());
      KrausChannel lambda = random_incoherent_channel(system.copies(n), rng());
      return TrialInput{TrialKind::incoherent, std::move(rho), n, std::move(lambda), std::nullopt, {}, std::nullopt};
    }
    case 1: {
      const auto system = SystemLayout::single("S", 2);
      const std::size_t n = 2 + (index / 3) % 2;
      PureState psi = random_pure(system, rng());
      PureState phi = random_pure(system, rng());
      if (dephased_entropy(psi) < dephased_entropy(phi)) std::swap(psi, phi);
      DensityOperator target = phi.density();
      KrausChannel lambda = replacement_channel(system.copies(n), tensor_power(target, n));
      return TrialInput{TrialKind::exact_target, psi.density(), n, std::move(lambda),
                        std::nullopt, {}, std::move(target)};
    }
    default: {
      const SystemLayout system({Factor{"A", 2, "A"}, Factor{"B", 2, "B"}});
      const std::size_t n = 2;
      const SystemLayout full = system.copies(n);
      const std::size_t rank = 1 + rng() % 4;
      DensityOperator rho = random_density(system, rank, rng());
      const std::vector<std::string> alice{"A#1", "A#2"}, bob{"B#1", "B#2"};
      const KrausChannel alice_part =
          unitary_channel(full.restricted_to(alice), random_unitary(4, rng()));
      KrausChannel bob_part = random_incoherent_channel(full.restricted_to(bob), rng());
      KrausChannel lambda = compose(embed(alice_part, full, alice), embed(bob_part, full, bob));
      return TrialInput{TrialKind::lqicc, std::move(rho), n, std::move(lambda),
                        std::move(bob_part), {"B"}, std::nullopt};
    }
  }
}

ExperimentReport monotonicity_harness(int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("monotonicity_harness: trials must be positive");
  ExperimentReport report;
  report.command = "monotonicity-sweep";
  report.config = {{"trials", trials}, {"seed", seed}};
  report.columns = {"trial", "n", "d", "eps_in", "dist_out", "ratio",
                    "cr_in", "cr_out", "cf_in", "cf_out", "pass"};
  long long passed = 0, violations = 0, rejections = 0;
  double worst_cr = 0.0, worst_cf = 0.0, worst_return = 0.0, worst_ratio = 0.0;
  ProtocolOptions options;
  options.dense = DensePath::never;
  for (int t = 0; t < trials; ++t) {
    const TrialInput input = sample_trial(seed, static_cast<std::size_t>(t));
    const TrialOutcome out = evaluate_trial(input, options);
    switch (out.verdict) {
      case Verdict::pass: ++passed; break;
      case Verdict::violation: ++violations; break;
      case Verdict::rejected: ++rejections; break;
    }
    if (out.verdict != Verdict::rejected) {
      worst_cr = std::max(worst_cr, out.cr_out - out.cr_in);
      if (out.cf_in) worst_cf = std::max(worst_cf, *out.cf_out - *out.cf_in);
      worst_return = std::max(worst_return, out.catalyst_return);
      worst_ratio = std::max(worst_ratio, out.ratio);
    }
    const auto opt = [](const std::optional<double>& v) -> Cell {
      return v ? Cell{*v} : Cell{};
    };
    report.add_row({static_cast<long long>(t), static_cast<long long>(input.copies),
                    static_cast<long long>(input.rho.dim()), out.eps_in, out.dist_out, out.ratio,
                    out.cr_in, out.cr_out, opt(out.cf_in), opt(out.cf_out),
                    out.verdict == Verdict::pass},
                   {{"kind", to_string(input.kind)},
                    {"verdict", to_string(out.verdict)},
                    {"catalyst_return", round12(out.catalyst_return)},
                    {"reason", out.reason}});
  }
  report.summary = {{"trials", trials},
                    {"passed", passed},
                    {"violations", violations},
                    {"rejected", rejections},
                    {"worst_cr_increase", round12(worst_cr)},
                    {"worst_cf_increase", round12(worst_cf)},
                    {"worst_catalyst_return", round12(worst_return)},
                    {"worst_ratio", round12(worst_ratio)}};
  report.passed = violations == 0 && rejections == 0;
  return report;
}

DensityOperator perturbed_target(const DensityOperator& sigma, std::size_t copies, double epsilon,
                                 std::uint64_t seed) {
  if (epsilon < 0.0) throw std::invalid_argument("perturbed_target: epsilon must be nonnegative");
  const DensityOperator base = tensor_power(sigma, copies);
  if (epsilon == 0.0) return base;
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    const DensityOperator omega =
        symmetrize(random_density(base.layout(), base.dim(), stream_seed(seed, attempt)), copies);
    const double delta = trace_distance(omega, base);
    if (delta >= epsilon) {
      const double t = epsilon / delta;
      return DensityOperator::trusted(base.layout(), (1.0 - t) * base.matrix() + t * omega.matrix());
    }
  }
  std::ostringstream msg;
  msg << "perturbed_target: no perturbation reaches distance " << epsilon;
  throw std::invalid_argument(msg.str());
}

ExperimentReport catalysis_sweep(std::size_t d, std::size_t copies, int trials, std::uint64_t seed,
                                 double epsilon) {
  if (d < 2) throw std::invalid_argument("catalysis_sweep: d must be at least 2");
  if (copies < 2 || copies > 6) throw std::invalid_argument("catalysis_sweep: n must lie in [2, 6]");
  if (trials < 1) throw std::invalid_argument("catalysis_sweep: trials must be positive");
  ExperimentReport report;
  report.command = "catalysis-demo";
  report.config = {{"d", d}, {"n", copies}, {"trials", trials}, {"seed", seed}, {"epsilon", epsilon}};
  report.columns = {"trial", "n", "d", "eps_in", "dist_out", "ratio",
                    "cr_in", "cr_out", "cf_in", "cf_out", "pass"};
  const auto system = SystemLayout::single("S", d);
  long long failures = 0;
  double worst_ratio = 0.0, worst_return = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(stream_seed(seed, static_cast<std::uint64_t>(t)));
    const DensityOperator rho = random_density(system, d, rng());
    const DensityOperator sigma = random_density(system, d, rng());
    const DensityOperator gamma = perturbed_target(sigma, copies, epsilon, rng());
    const KrausChannel lambda = replacement_channel(system.copies(copies), gamma);
    const CatalystState tau = build_catalyst(rho, gamma, copies);
    const ProtocolTrace trace = run_protocol(rho, sigma, tau, lambda);

    const double eps_in = trace.distances.gamma_to_target;
    const double dist_out = trace.distances.joint_to_target;
    const double ratio = ratio_of(dist_out, eps_in);
    const bool ok = trace.distances.catalyst_return <= tol::psd &&
                    dist_out <= 2.0 * eps_in + tol::equality &&
                    (eps_in <= kRatioFloor || ratio <= 2.0 + tol::optimizer) &&
                    (!trace.dense || trace.dense->max_deviation <= tol::symmetry);
    if (!ok) ++failures;
    worst_ratio = std::max(worst_ratio, ratio);
    worst_return = std::max(worst_return, trace.distances.catalyst_return);
    nlohmann::json extra = {{"catalyst_return", round12(trace.distances.catalyst_return)},
                            {"output_to_target", round12(trace.distances.output_to_target)},
                            {"twirled", trace.certification.twirled}};
    if (trace.dense) extra["dense_deviation"] = round12(trace.dense->max_deviation);
    report.add_row({static_cast<long long>(t), static_cast<long long>(copies),
                    static_cast<long long>(d), eps_in, dist_out, ratio,
                    relative_entropy_of_coherence(rho).value,
                    relative_entropy_of_coherence(trace.output).value,
                    coherence_of_formation(rho).value, coherence_of_formation(trace.output).value, ok},
                   std::move(extra));
  }
  report.summary = {{"trials", trials},
                    {"failures", failures},
                    {"worst_ratio", round12(worst_ratio)},
                    {"worst_catalyst_return", round12(worst_return)}};
  report.passed = failures == 0;
  return report;
}

}  // namespace cohcat
