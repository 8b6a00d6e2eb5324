#pragma once

// Tabular command output, written as CSV with a leading `# units:` line.

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "microgen/device_file.hpp"
#include "microgen/error.hpp"

namespace microgen::io {

/// A cell holds a number or a label. NaN marks an unavailable value.
using Cell = std::variant<double, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::string> units;
  std::vector<std::vector<Cell>> rows;

  void add_column(std::string name, std::string unit) {
    columns.push_back(std::move(name));
    units.push_back(std::move(unit));
  }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw DomainError("result table: row width " + std::to_string(row.size()) +
                        " does not match " + std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw DomainError("result table: no column '" + name + "'");
  }

  double number(std::size_t row, const std::string& name) const {
    return std::get<double>(rows.at(row).at(column(name)));
  }
};

inline std::string format_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double v = std::get<double>(c);
  if (std::isnan(v)) return "NA";
  return format_number(v);
}

inline void write_csv(std::ostream& out, const ResultTable& t) {
  auto join = [&](const std::vector<std::string>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
    out << '\n';
  };
  out << "# units: ";
  join(t.units);
  join(t.columns);
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

inline std::string to_csv(const ResultTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

}  // namespace microgen::io
