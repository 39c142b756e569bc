#pragma once

#include <string>

#include <json.hpp>

#include "cohcat/catalysis.hpp"
#include "cohcat/channels.hpp"
#include "cohcat/measures.hpp"
#include "cohcat/protocols.hpp"
#include "cohcat/states.hpp"

namespace cohcat {

using nlohmann::json;

/// [[label, dim, party], ...]
json to_json(const SystemLayout& layout);
SystemLayout layout_from_json(const json& j);

/// Row-major list of [re, im] pairs.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols);

/// {"layout": ..., "matrix": ...}. Doubles are written in shortest
/// round-trip form, so parsing restores them exactly.
json to_json(const DensityOperator& rho);
/// {"layout": ..., "amplitudes": [[re, im], ...]}.
json to_json(const PureState& psi);

/// Accepts either form; a pure state is returned as its density operator.
DensityOperator state_from_json(const json& j);
PureState pure_state_from_json(const json& j);

/// {"input_layout", "output_layout", "kraus": [matrix, ...]}. Unmaterialized
/// replacement channels are written with "constant_output" instead.
json to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const json& j);

json to_json(const MeasureResult& r);
json to_json(const RegisterState& s);
json to_json(const ProtocolTrace& t);
json to_json(const MergeAnalysis& m);
json to_json(const MergeBoundReport& r);

DensityOperator load_state(const std::string& path);
void save_state(const std::string& path, const DensityOperator& rho);

}  // namespace cohcat
