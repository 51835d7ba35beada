#include "graphdm/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "graphdm/error.hpp"

namespace graphdm {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const CsvTable& table, const std::string& path) {
  if (table.header.size() !=
      static_cast<std::size_t>(table.values.cols()) + 1)
    throw ParameterError("write_csv: header does not match column count");
  if (table.ids.size() != static_cast<std::size_t>(table.values.rows()))
    throw ParameterError("write_csv: id count does not match row count");

  std::ofstream out(path);
  if (!out) throw DataError("cannot open for write: " + path);
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out << ',';
    out << table.header[c];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    out << table.ids[r];
    for (Eigen::Index c = 0; c < table.values.cols(); ++c)
      out << ',' << format_double(table.values(r, c));
    out << '\n';
  }
  if (!out) throw DataError("failed writing: " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);

  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV file: " + path);

  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(s);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!s.empty() && s.back() == ',') fields.emplace_back();
    return fields;
  };

  table.header = split(line);
  const std::size_t cols = table.header.size();
  if (cols < 1) throw DataError("CSV header has no columns: " + path);

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != cols)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(cols) + " fields, got " +
                      std::to_string(fields.size()));
    table.ids.push_back(fields[0]);
    std::vector<double> row(cols - 1);
    for (std::size_t c = 1; c < cols; ++c) {
      char* end = nullptr;
      row[c - 1] = std::strtod(fields[c].c_str(), &end);
      if (end == fields[c].c_str())
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": field " + std::to_string(c) + " is not numeric");
    }
    rows.push_back(std::move(row));
  }

  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols - 1));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c + 1 < cols; ++c)
      table.values(static_cast<Eigen::Index>(r),
                   static_cast<Eigen::Index>(c)) = rows[r][c];
  return table;
}

}  // namespace graphdm
