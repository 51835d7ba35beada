#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace graphdm {

/// The one CSV shape this project emits: a header row, a leading string
/// column (id / label), and numeric columns. Doubles are written with 17
/// significant digits so files round-trip bit-exactly.
struct CsvTable {
  std::vector<std::string> header;  // includes the id column name
  std::vector<std::string> ids;
  Eigen::MatrixXd values;  // ids.size() x (header.size() - 1)
};

void write_csv(const CsvTable& table, const std::string& path);
CsvTable read_csv(const std::string& path);

/// Formats one double with full round-trip precision.
std::string format_double(double x);

}  // namespace graphdm
