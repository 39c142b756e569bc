#include "cohcat/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace cohcat {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  // Avoid "-0" in fixtures.
  if (std::string(buf) == "-0") return "0";
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

namespace {

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::json cell_json(const Cell& c) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(long long v) const { return v; }
    nlohmann::json operator()(double v) const {
      if (!std::isfinite(v)) return format_number(v);
      return round12(v);
    }
    nlohmann::json operator()(const std::string& v) const { return v; }
    nlohmann::json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

void ExperimentReport::add_row(std::vector<Cell> row, nlohmann::json extra) {
  if (row.size() != columns.size()) {
    throw std::logic_error("ExperimentReport: row width does not match header");
  }
  rows.push_back(std::move(row));
  extras.push_back(std::move(extra));
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\n";
  }
  return out.str();
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  j["columns"] = columns;
  nlohmann::json rs = nlohmann::json::array();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = cell_json(rows[r][i]);
    if (r < extras.size()) {
      for (const auto& [k, v] : extras[r].items()) obj[k] = v;
    }
    rs.push_back(std::move(obj));
  }
  j["rows"] = std::move(rs);
  j["summary"] = summary;
  j["passed"] = passed;
  return j;
}

}  // namespace cohcat
