// cohcat: run catalysis and coherence-rate experiments, emit CSV or JSON.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohcat/catalysis.hpp"
#include "cohcat/measures.hpp"
#include "cohcat/protocols.hpp"
#include "cohcat/serialize.hpp"
#include "cohcat/tolerance.hpp"

using namespace cohcat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::optional<long long> d, n, trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<std::string> state_file, out, format, config;
};

struct Config {
  std::string command;
  long long d = 2;
  long long n = 3;
  long long trials = 1;
  std::uint64_t seed = 1;
  double epsilon = 0.0;
  std::string state_file;
  std::string out;
  std::string format = "csv";

  nlohmann::json to_json() const {
    nlohmann::json j = {{"command", command}, {"d", d},           {"n", n},
                        {"trials", trials},   {"seed", seed},     {"epsilon", epsilon},
                        {"format", format}};
    j["state_file"] = state_file.empty() ? nlohmann::json(nullptr) : nlohmann::json(state_file);
    return j;
  }
};

long long default_trials(const std::string& command) {
  if (command == "catalysis-demo" || command == "rates") return 1;
  return 100;
}

template <typename T>
void take(std::optional<T>& slot, const nlohmann::json& cfg, const char* key) {
  if (slot || !cfg.contains(key)) return;
  try {
    slot = cfg.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

Config resolve(const std::string& command, Flags f) {
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw UsageError("cannot open config file '" + *f.config + "'");
    nlohmann::json cfg;
    try {
      in >> cfg;
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config file: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    take(f.d, cfg, "d");
    take(f.n, cfg, "n");
    take(f.trials, cfg, "trials");
    take(f.seed, cfg, "seed");
    take(f.epsilon, cfg, "epsilon");
    take(f.state_file, cfg, "state_file");
    take(f.out, cfg, "out");
    take(f.format, cfg, "format");
  }
  if (!f.seed) {
    if (const char* env = std::getenv("COHCAT_SEED"); env && *env) {
      try {
        std::size_t used = 0;
        f.seed = std::stoull(env, &used);
        if (env[used] != '\0') throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw UsageError(std::string("COHCAT_SEED is not an unsigned integer: ") + env);
      }
    }
  }

  Config c;
  c.command = command;
  c.d = f.d.value_or(c.d);
  c.n = f.n.value_or(c.n);
  c.trials = f.trials.value_or(default_trials(command));
  c.seed = f.seed.value_or(c.seed);
  c.epsilon = f.epsilon.value_or(c.epsilon);
  c.state_file = f.state_file.value_or("");
  c.out = f.out.value_or("");
  c.format = f.format.value_or(c.format);

  if (c.d < 2) throw UsageError("--d must be at least 2");
  if (c.n < 2 || c.n > 6) throw UsageError("--n must lie in [2, 6]");
  if (c.trials < 1) throw UsageError("--trials must be at least 1");
  if (!(c.epsilon >= 0.0)) throw UsageError("--epsilon must be nonnegative");
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
  return c;
}

std::vector<std::string> party_labels_or_throw(const SystemLayout& layout, const std::string& party) {
  try {
    return layout.party_labels(party);
  } catch (const std::invalid_argument&) {
    throw UsageError("state file has no party '" + party + "'");
  }
}

ExperimentReport rates_report(const Config& c) {
  const DensityOperator rho =
      c.state_file.empty()
          ? random_density(SystemLayout::single("S", static_cast<std::size_t>(c.d)),
                           static_cast<std::size_t>(c.d), c.seed)
          : load_state(c.state_file);
  ExperimentReport r;
  r.command = "rates";
  r.columns = {"measure", "value", "certified"};
  const MeasureResult cr = relative_entropy_of_coherence(rho);
  const MeasureResult cd = distillable_coherence(rho);
  const MeasureResult cf = coherence_of_formation(rho);
  const MeasureResult cc = coherence_cost(rho);
  r.add_row({std::string("C_r"), cr.value, std::string(to_string(cr.certified))});
  r.add_row({std::string("C_d"), cd.value, std::string(to_string(cd.certified))});
  nlohmann::json cf_extra = nlohmann::json::object();
  if (const auto j = to_json(cf); j.contains("diagnostics")) cf_extra["diagnostics"] = j["diagnostics"];
  r.add_row({std::string("C_f"), cf.value, std::string(to_string(cf.certified))}, cf_extra);
  r.add_row({std::string("C_c"), cc.value, std::string(to_string(cc.certified))});
  bool ok = cr.value >= -tol::equality && cf.value >= cr.value - tol::optimizer &&
            cc.value >= cd.value - tol::optimizer;
  const auto parties = rho.layout().parties();
  if (parties.size() > 1) {
    for (const std::string& p : parties) {
      const MeasureResult qi = qi_relative_entropy(rho, rho.layout().party_labels(p));
      r.add_row({"C_r^{rest|" + p + "}", qi.value, std::string(to_string(qi.certified))});
      ok = ok && qi.value >= -tol::equality && qi.value <= cr.value + tol::equality;
    }
  }
  r.summary = {{"dim", rho.dim()}, {"parties", parties}};
  r.passed = ok;
  return r;
}

ExperimentReport run(const Config& c) {
  const auto d = static_cast<std::size_t>(c.d);
  const int trials = static_cast<int>(c.trials);
  if (c.command == "catalysis-demo") {
    return catalysis_sweep(d, static_cast<std::size_t>(c.n), trials, c.seed, c.epsilon);
  }
  if (c.command == "monotonicity-sweep") return monotonicity_harness(trials, c.seed);
  if (c.command == "rates") return rates_report(c);
  if (c.command == "assisted") {
    if (c.state_file.empty()) return assisted_sweep(d, trials, c.seed);
    const DensityOperator rho = load_state(c.state_file);
    const auto parties = rho.layout().parties();
    if (parties.size() < 2) throw UsageError("assisted needs a state with at least two parties");
    return assisted_report(rho, rho.layout().party_labels(parties.back()));
  }
  if (c.command == "iqsm") {
    if (c.state_file.empty()) return iqsm_sweep(d, trials, c.seed);
    const PureState psi = [&] {
      std::ifstream in(c.state_file);
      if (!in) throw UsageError("cannot open state file '" + c.state_file + "'");
      const nlohmann::json j = nlohmann::json::parse(in);
      if (j.contains("amplitudes")) return pure_state_from_json(j);
      const DensityOperator rho = state_from_json(j);
      const Spectrum s = hermitian_eig(rho.matrix());
      if (s.eigenvalues(0) < 1.0 - tol::equality) throw UsageError("iqsm needs a pure state");
      return PureState(rho.layout(), Vector(s.eigenvectors.col(0)));
    }();
    const auto& layout = psi.layout();
    const auto r = party_labels_or_throw(layout, "R");
    const auto a = party_labels_or_throw(layout, "A");
    const auto b = party_labels_or_throw(layout, "B");
    const MergeAnalysis m = iqsm_e0(psi, r, a, b);
    std::size_t bob_dim = 1;
    for (const auto& l : b) bob_dim *= layout.factors()[layout.index_of(l)].dim;
    const PureState chi = schmidt_state_with_entropy(std::max(m.e0, 0.0), std::max<std::size_t>(bob_dim, 2));
    const MergeBoundReport bound = verify_merge_bound(psi, r, a, b, chi);
    ExperimentReport rep;
    rep.command = "iqsm";
    rep.columns = {"trial", "e0", "tradeoff_rhs", "cond_entropy", "R", "margin"};
    rep.add_row({0LL, m.e0, m.tradeoff_rhs, m.conditional_entropy, bound.resource, bound.margin},
                {{"analysis", to_json(m)}, {"bound", to_json(bound)}});
    rep.passed = bound.chain_consistent() && m.tradeoff_rhs >= -tol::equality;
    return rep;
  }
  throw UsageError("unknown command '" + c.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Catalytic coherence transformation experiments"};
  app.require_subcommand(1);
  Flags flags;
  const char* commands[][2] = {
      {"catalysis-demo", "Run the catalytic protocol with a target at distance epsilon"},
      {"monotonicity-sweep", "Check coherence monotones over random certified trials"},
      {"rates", "Coherence measures of a state"},
      {"assisted", "Assisted distillation rate versus its quantum-incoherent bound"},
      {"iqsm", "Incoherent quantum state merging rates"},
  };
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd[0], cmd[1]);
    sub->add_option("--d", flags.d, "Local dimension");
    sub->add_option("--n", flags.n, "Number of copies");
    sub->add_option("--trials", flags.trials, "Number of trials");
    sub->add_option("--seed", flags.seed, "Seed (falls back to COHCAT_SEED)");
    sub->add_option("--epsilon", flags.epsilon, "Target distance");
    sub->add_option("--state-file", flags.state_file, "State JSON");
    sub->add_option("--out", flags.out, "Output file (default stdout)");
    sub->add_option("--format", flags.format, "csv or json");
    sub->add_option("--config", flags.config, "JSON config; flags take precedence");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Config config;
  ExperimentReport report;
  try {
    config = resolve(command, flags);
    report = run(config);
  } catch (const std::exception& e) {
    std::cerr << "cohcat " << command << ": " << e.what() << "\n";
    return kExitUsage;
  }
  report.config = config.to_json();

  const std::string text = config.format == "json" ? report.to_json().dump(2) + "\n" : report.to_csv();
  if (config.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(config.out, std::ios::binary);
    if (!out) {
      std::cerr << "cohcat: cannot write '" << config.out << "'\n";
      return kExitUsage;
    }
    out << text;
  }
  if (!report.passed) {
    std::cerr << "cohcat " << command << ": invariant violation (see report)\n";
    return kExitViolation;
  }
  return kExitOk;
}
