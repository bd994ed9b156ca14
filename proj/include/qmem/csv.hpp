#pragma once

// Column-oriented CSV with a single header row, ',' separators and '\n'
// line ends. Numbers are written with 17 significant digits so that the
// payload reads back bit-exactly.

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qmem/memory_map.hpp"

namespace qmem {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  void add(std::string name, std::vector<double> values);
  void add(std::string name, const Eigen::VectorXd& values);
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

std::string format_number(double v);

/// Throws UsageError if the columns have unequal lengths.
std::string to_csv(const CsvTable& table);

/// Throws ParseError (with line number) on ragged rows or non-numeric cells.
CsvTable parse_csv(std::string_view text);

/// Writes `contents` to `path`. Throws std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& contents);

/// Kernel as CSV: header "t\tp" followed by the input-grid nodes, then one
/// row per output node starting with t_i.
std::string kernel_to_csv(const KernelMatrix& kernel);

/// JSON sidecar with the model parameters, grids and z-quadrature estimate.
std::string kernel_metadata_json(const KernelMatrix& kernel);

}  // namespace qmem
