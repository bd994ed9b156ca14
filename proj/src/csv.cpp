#include "qmem/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "qmem/errors.hpp"

namespace qmem {

void CsvTable::add(std::string name, std::vector<double> values) {
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

void CsvTable::add(std::string name, const Eigen::VectorXd& values) {
  add(std::move(name), std::vector<double>(values.data(), values.data() + values.size()));
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  if (table.header.size() != table.columns.size()) throw UsageError("csv header and column count differ");
  const std::size_t rows = table.rows();
  for (const auto& c : table.columns)
    if (c.size() != rows) throw UsageError("csv columns have unequal lengths");
  std::string out;
  for (std::size_t j = 0; j < table.header.size(); ++j) out += (j ? "," : "") + table.header[j];
  out += '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j) out += ',';
      out += format_number(table.columns[j][i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto c = line.find(',', pos);
    cells.push_back(line.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return cells;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto cells = split(line);
    if (line_no == 1) {
      for (auto c : cells) t.header.emplace_back(c);
      t.columns.resize(cells.size());
      continue;
    }
    if (line.empty()) continue;
    if (cells.size() != t.header.size()) throw ParseError(line_no, "row has " + std::to_string(cells.size()) +
                                                                       " cells, header has " +
                                                                       std::to_string(t.header.size()));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(cells[j].data(), cells[j].data() + cells[j].size(), v);
      if (ec != std::errc() || p != cells[j].data() + cells[j].size())
        throw ParseError(line_no, "non-numeric cell '" + std::string(cells[j]) + "'");
      t.columns[j].push_back(v);
    }
  }
  if (line_no == 0) throw ParseError(1, "missing header row");
  return t;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string kernel_to_csv(const KernelMatrix& kernel) {
  CsvTable t;
  t.add("t\\tp", kernel.t_grid.nodes());
  for (int j = 0; j < kernel.tp_grid.size(); ++j) {
    std::vector<double> col(kernel.values.rows());
    for (Eigen::Index i = 0; i < kernel.values.rows(); ++i) col[i] = kernel.values(i, j);
    t.add(format_number(kernel.tp_grid[j]), std::move(col));
  }
  return to_csv(t);
}

std::string kernel_metadata_json(const KernelMatrix& kernel) {
  nlohmann::ordered_json j;
  if (kernel.params) {
    const ModelParams& m = *kernel.params;
    j["model"] = {{"regime", to_string(m.regime)}, {"L", m.length},   {"T_W", m.write_time}, {"T_R", m.read_time},
                  {"direction", to_string(m.direction)}, {"n_t", m.n_t}, {"n_tp", m.n_tp}, {"n_z", m.n_z}};
  }
  j["t_grid"] = {{"start", kernel.t_grid.start}, {"stop", kernel.t_grid.stop}, {"intervals", kernel.t_grid.intervals}};
  j["tp_grid"] = {{"start", kernel.tp_grid.start}, {"stop", kernel.tp_grid.stop}, {"intervals", kernel.tp_grid.intervals}};
  j["quadrature"] = "simpson";
  j["layout"] = "row i = output time t_i, column j = input time t'_j";
  j["z_error_estimate"] = kernel.z_error_estimate;
  return j.dump(2) + "\n";
}

}  // namespace qmem
