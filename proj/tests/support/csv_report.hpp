#pragma once

// Reads the sweep/plan CSV back into named columns.

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcc::testing {

struct CsvRow {
  std::map<std::string, std::string> cells;

  const std::string& text(const std::string& column) const { return cells.at(column); }
  double number(const std::string& column) const { return std::stod(cells.at(column)); }
};

inline std::vector<CsvRow> read_report(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (header.empty()) {
      header = fields;
      continue;
    }
    if (fields.size() != header.size()) throw std::runtime_error("ragged row: " + line);
    CsvRow row;
    for (size_t i = 0; i < header.size(); ++i) row.cells[header[i]] = fields[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

// Rows of one mode, in file order.
inline std::vector<CsvRow> rows_of(const std::vector<CsvRow>& rows, const std::string& mode) {
  std::vector<CsvRow> out;
  for (const auto& r : rows) {
    if (r.text("mode") == mode) out.push_back(r);
  }
  return out;
}

}  // namespace qcc::testing
