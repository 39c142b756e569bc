#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cohcat {

/// Empty cells print as nothing in CSV and null in JSON.
using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

/// Tabular record of a sweep. Rows are ordered by trial index; `extras`
/// carries per-row fields that only appear in the JSON form.
struct ExperimentReport {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<nlohmann::json> extras;
  nlohmann::json summary = nlohmann::json::object();
  bool passed = true;

  void add_row(std::vector<Cell> row, nlohmann::json extra = nlohmann::json::object());

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Formats with 12 significant digits.
std::string format_number(double x);
/// Rounds to the value format_number prints.
double round12(double x);

}  // namespace cohcat
