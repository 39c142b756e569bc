#include "cohcat/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace cohcat {

namespace {

json complex_pair(Complex z) { return json::array({z.real(), z.imag()}); }

Complex pair_value(const json& p) {
  if (!p.is_array() || p.size() != 2) throw std::invalid_argument("expected [re, im] pair");
  return {p.at(0).get<double>(), p.at(1).get<double>()};
}

}  // namespace

json to_json(const SystemLayout& layout) {
  json out = json::array();
  for (const Factor& f : layout.factors()) out.push_back(json::array({f.label, f.dim, f.party}));
  return out;
}

SystemLayout layout_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("layout must be an array");
  std::vector<Factor> factors;
  for (const json& f : j) {
    if (!f.is_array() || f.size() < 2 || f.size() > 3) {
      throw std::invalid_argument("layout entries are [label, dim, party]");
    }
    const auto label = f.at(0).get<std::string>();
    const auto dim = f.at(1).get<std::size_t>();
    factors.push_back({label, dim, f.size() == 3 ? f.at(2).get<std::string>() : label});
  }
  return SystemLayout(std::move(factors));
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_pair(m(r, c)));
  return out;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows * cols) {
    throw std::invalid_argument("matrix has " + std::to_string(j.size()) + " entries, expected " +
                                std::to_string(rows * cols));
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = pair_value(j[r * cols + c]);
  return m;
}

json to_json(const DensityOperator& rho) {
  return {{"layout", to_json(rho.layout())}, {"matrix", matrix_to_json(rho.matrix())}};
}

json to_json(const PureState& psi) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) amps.push_back(complex_pair(psi.amplitudes()(i)));
  return {{"layout", to_json(psi.layout())}, {"amplitudes", amps}};
}

PureState pure_state_from_json(const json& j) {
  SystemLayout layout = layout_from_json(j.at("layout"));
  const std::size_t d = layout.total_dim();
  return PureState(std::move(layout), matrix_from_json(j.at("amplitudes"), d, 1).col(0));
}

DensityOperator state_from_json(const json& j) {
  if (j.contains("amplitudes")) return pure_state_from_json(j).density();
  SystemLayout layout = layout_from_json(j.at("layout"));
  const std::size_t d = layout.total_dim();
  return DensityOperator(std::move(layout), matrix_from_json(j.at("matrix"), d, d));
}

json to_json(const KrausChannel& ch) {
  json out = {{"input_layout", to_json(ch.input_layout())},
              {"output_layout", to_json(ch.output_layout())}};
  if (ch.has_kraus()) {
    json ks = json::array();
    for (const Matrix& k : ch.kraus()) ks.push_back(matrix_to_json(k));
    out["kraus"] = ks;
  } else {
    out["constant_output"] = matrix_to_json(*ch.constant_output());
  }
  return out;
}

KrausChannel channel_from_json(const json& j) {
  SystemLayout in = layout_from_json(j.at("input_layout"));
  SystemLayout out = layout_from_json(j.at("output_layout"));
  if (j.contains("constant_output")) {
    const std::size_t d = out.total_dim();
    return replacement_channel(in, DensityOperator(out, matrix_from_json(j.at("constant_output"), d, d)));
  }
  std::vector<Matrix> kraus;
  for (const json& k : j.at("kraus")) kraus.push_back(matrix_from_json(k, out.total_dim(), in.total_dim()));
  return KrausChannel(std::move(in), std::move(out), std::move(kraus));
}

json to_json(const MeasureResult& r) {
  json out = {{"value", r.value}, {"certified", to_string(r.certified)}};
  if (r.certified == Certification::upper_bound) {
    out["diagnostics"] = {{"restarts", r.diagnostics.restarts},
                          {"sweeps", r.diagnostics.sweeps},
                          {"evaluations", r.diagnostics.evaluations},
                          {"best_restart", r.diagnostics.best_restart}};
  }
  return out;
}

json to_json(const RegisterState& s) {
  json blocks = json::array();
  for (const auto& b : s.blocks()) blocks.push_back({{"weight", b.weight}, {"state", to_json(b.op)}});
  return {{"system", to_json(s.system())}, {"register", s.register_label()}, {"blocks", blocks}};
}

json to_json(const ProtocolTrace& t) {
  const auto& d = t.distances;
  const auto& c = t.certification;
  json out = {
      {"distances",
       {{"gamma_to_target", d.gamma_to_target},
        {"joint_to_target", d.joint_to_target},
        {"catalyst_return", d.catalyst_return},
        {"output_to_target", d.output_to_target}}},
      {"certification",
       {{"lambda_incoherent", c.lambda_incoherent},
        {"register_shift_incoherent", c.register_shift_incoherent},
        {"swap_incoherent", c.swap_incoherent},
        {"step1_trace_error", c.step1_trace_error},
        {"twirled", c.twirled}}},
      {"gamma", to_json(t.gamma)},
      {"output", to_json(t.output)},
      {"mu1", to_json(t.mu1)},
      {"mu2", to_json(t.mu2)},
      {"mu_sc", to_json(t.mu_sc)},
      {"catalyst_marginal", to_json(t.catalyst_marginal)},
  };
  if (t.dense) out["dense_max_deviation"] = t.dense->max_deviation;
  return out;
}

json to_json(const MergeAnalysis& m) {
  return {{"e0", m.e0},
          {"tradeoff_rhs", m.tradeoff_rhs},
          {"conditional_entropy", m.conditional_entropy},
          {"chain", m.chain}};
}

json to_json(const MergeBoundReport& r) {
  return {{"resource", r.resource},
          {"resource_qi", r.resource_qi},
          {"psi_qi", r.psi_qi},
          {"bob_dephased", r.bob_dephased},
          {"joint_qi", r.joint_qi},
          {"merged_qi", r.merged_qi},
          {"joint_dephased", r.joint_dephased},
          {"e0", r.e0},
          {"margin", r.margin},
          {"resource_identity", r.resource_identity},
          {"pure_state_identity", r.pure_state_identity},
          {"additivity", r.additivity},
          {"relabeling", r.relabeling},
          {"chain_consistent", r.chain_consistent()},
          {"sufficient", r.sufficient}};
}

DensityOperator load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("state file '" + path + "': " + e.what());
  }
  return state_from_json(j);
}

void save_state(const std::string& path, const DensityOperator& rho) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << to_json(rho).dump(2) << '\n';
}

}  // namespace cohcat
